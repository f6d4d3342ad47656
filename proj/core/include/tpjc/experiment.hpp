#pragma once

// Config-driven experiment runner: config parsing and validation, the run
// pipeline, the oracle comparison report, and CSV/JSON emitters.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpjc/dynamics.hpp"
#include "tpjc/fock.hpp"
#include "tpjc/sg_states.hpp"
#include "tpjc/tolerances.hpp"

namespace tpjc {

enum class OutputKind { FockDist, FidelitySeries, MandelQ, MeanPhoton, ApproxErrorTable, OracleCheck };

std::string_view to_string(OutputKind kind) noexcept;

struct ExperimentConfig {
  Complex alpha{0.0, 0.0};
  Mode mode = Mode::Add;
  int m = 0;
  std::optional<std::size_t> dim;
  double g = 1.0;
  Tolerances tolerances;
  std::vector<OutputKind> outputs{OutputKind::FockDist, OutputKind::FidelitySeries, OutputKind::MandelQ,
                                  OutputKind::MeanPhoton};
};

/// Parses one experiment from JSON text. Unknown keys, wrong types and
/// out-of-range values raise ConfigInvalid. Truncation is validated too,
/// see minimum_dimension().
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Smallest truncation the run accepts: at least |alpha|^2 + 2m + 3, and large
/// enough that the coherent mass which can reach the top two levels during
/// the run stays below tail_tol.
std::size_t minimum_dimension(Complex alpha, int m, Mode mode, const Tolerances& tol);

/// The configured dim, or the recommended default (never below the minimum).
std::size_t resolved_dimension(const ExperimentConfig& config);

struct OracleReport {
  std::size_t dim = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t comparisons = 0;
  double max_deviation = 0.0;
  double max_norm_defect = 0.0;
  double threshold = 1e-8;

  bool passed() const noexcept { return max_deviation <= threshold; }
  std::string to_text() const;
};

inline constexpr double kOracleTimes[] = {0.3, 3.141592653589793, 7.1};

/// Compares evolve_closed_form with the diagonalization oracle on `trials`
/// seeded random states at each of kOracleTimes (g = 1). dim must lie in [3, 128].
OracleReport oracle_check(std::size_t dim, std::size_t trials, std::uint64_t seed);

struct ApproxRow {
  std::size_t j = 0;
  double add_error = 0.0;
  double subtract_error = 0.0;
};

/// Rows j = 2..max_j (the subtract branch is undefined below 2).
std::vector<ApproxRow> approx_table(std::size_t max_j);
void write_approx_table_csv(const std::vector<ApproxRow>& rows, std::ostream& os);

/// make_coherent + run_protocol; mandel_q_predicted is the coherent-base
/// prediction -+2m/(|alpha|^2 +- 2m).
ProtocolResult run_experiment(const ExperimentConfig& config);

void write_fidelity_csv(const ProtocolResult& result, std::ostream& os);
void write_distribution_csv(const ProtocolResult& result, std::ostream& os);
void write_json(const ProtocolResult& result, std::ostream& os);

/// emit_csv writes fidelity.csv and distribution.csv into `dir`.
void emit_csv(const ProtocolResult& result, const std::filesystem::path& dir);
void emit_json(const ProtocolResult& result, const std::filesystem::path& path);
ProtocolResult parse_result_json(std::string_view json_text);
ProtocolResult load_result_json(const std::filesystem::path& path);

/// Runs a config file end to end, writing result.json plus one file per
/// requested output into `out_dir`. Returns the written paths in write order.
std::vector<std::filesystem::path> run_config_file(const std::filesystem::path& config_path,
                                                   const std::filesystem::path& out_dir);

}  // namespace tpjc
