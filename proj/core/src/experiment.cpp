#include "tpjc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"
#include "tpjc/errors.hpp"

namespace tpjc {

namespace {

using nlohmann::json;

// 17 significant digits; NaN is spelled per target format by the caller.
std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string json_num(double v) { return std::isfinite(v) ? num(v) : std::string("null"); }

[[noreturn]] void invalid(const std::string& what) { throw ConfigInvalid("invalid config: " + what); }

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) invalid("\"" + key + "\" must be a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) invalid("\"" + key + "\" must be finite");
  return v;
}

Complex parse_alpha(const json& j) {
  if (j.is_number()) return {require_number(j, "alpha"), 0.0};
  if (j.is_array()) {
    if (j.size() != 2) invalid("\"alpha\" array must be [re, im]");
    return {require_number(j[0], "alpha[0]"), require_number(j[1], "alpha[1]")};
  }
  if (j.is_object()) {
    for (const auto& [key, _] : j.items()) {
      if (key != "re" && key != "im") invalid("unknown key \"alpha." + key + "\"");
    }
    double re = j.contains("re") ? require_number(j["re"], "alpha.re") : 0.0;
    double im = j.contains("im") ? require_number(j["im"], "alpha.im") : 0.0;
    return {re, im};
  }
  invalid("\"alpha\" must be {\"re\": x, \"im\": y}, [re, im] or a number");
}

OutputKind parse_output(const std::string& s) {
  static const std::pair<const char*, OutputKind> kNames[] = {
      {"fock_dist", OutputKind::FockDist},           {"fidelity_series", OutputKind::FidelitySeries},
      {"mandel_q", OutputKind::MandelQ},             {"mean_photon", OutputKind::MeanPhoton},
      {"approx_error_table", OutputKind::ApproxErrorTable}, {"oracle_check", OutputKind::OracleCheck},
  };
  for (const auto& [name, kind] : kNames) {
    if (s == name) return kind;
  }
  invalid("unknown output \"" + s + "\"");
}

Tolerances parse_tolerances(const json& j) {
  if (!j.is_object()) invalid("\"tolerances\" must be an object");
  Tolerances t;
  for (const auto& [key, value] : j.items()) {
    double v = require_number(value, "tolerances." + key);
    if (key == "norm_tol") t.norm_tol = v;
    else if (key == "herm_tol") t.herm_tol = v;
    else if (key == "psd_tol") t.psd_tol = v;
    else if (key == "tail_tol") t.tail_tol = v;
    else if (key == "low_mass_tol") t.low_mass_tol = v;
    else invalid("unknown key \"tolerances." + key + "\"");
  }
  try {
    t.validate();
  } catch (const InvalidArgument& e) {
    invalid(e.what());
  }
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

double json_double(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

std::string_view to_string(OutputKind kind) noexcept {
  switch (kind) {
    case OutputKind::FockDist: return "fock_dist";
    case OutputKind::FidelitySeries: return "fidelity_series";
    case OutputKind::MandelQ: return "mandel_q";
    case OutputKind::MeanPhoton: return "mean_photon";
    case OutputKind::ApproxErrorTable: return "approx_error_table";
    case OutputKind::OracleCheck: return "oracle_check";
  }
  return "unknown";
}

// Config

std::size_t minimum_dimension(Complex alpha, int m, Mode mode, const Tolerances& tol) {
  const auto floor = static_cast<std::size_t>(std::ceil(std::norm(alpha) + 2.0 * m + 3.0));
  std::size_t tail_based = coherent_minimum_dimension(alpha, tol.tail_tol);
  // During an addition run the mass now in the top two levels started at or
  // above N - 2m.
  if (mode == Mode::Add) tail_based += static_cast<std::size_t>(2 * m);
  return std::max(floor, tail_based);
}

std::size_t resolved_dimension(const ExperimentConfig& config) {
  std::size_t minimum = minimum_dimension(config.alpha, config.m, config.mode, config.tolerances);
  if (config.dim) return *config.dim;
  std::size_t gain = config.mode == Mode::Add ? static_cast<std::size_t>(2 * config.m) : 0;
  return std::max(minimum, recommended_dimension(std::abs(config.alpha), gain));
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    invalid(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) invalid("top level must be an object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") {
      cfg.alpha = parse_alpha(value);
    } else if (key == "mode") {
      if (!value.is_string()) invalid("\"mode\" must be a string");
      try {
        cfg.mode = parse_mode(value.get<std::string>());
      } catch (const InvalidArgument& e) {
        invalid(e.what());
      }
    } else if (key == "m") {
      if (!value.is_number_integer()) invalid("\"m\" must be an integer");
      auto m = value.get<std::int64_t>();
      if (m < 0) invalid("\"m\" must be non-negative");
      if (m > 100000) invalid("\"m\" is unreasonably large");
      cfg.m = static_cast<int>(m);
    } else if (key == "dim") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1) invalid("\"dim\" must be a positive integer");
      cfg.dim = value.get<std::size_t>();
    } else if (key == "g") {
      cfg.g = require_number(value, "g");
      if (!(cfg.g > 0.0)) invalid("\"g\" must be positive");
    } else if (key == "tolerances") {
      cfg.tolerances = parse_tolerances(value);
    } else if (key == "outputs") {
      if (!value.is_array()) invalid("\"outputs\" must be an array of strings");
      cfg.outputs.clear();
      for (const auto& o : value) {
        if (!o.is_string()) invalid("\"outputs\" entries must be strings");
        OutputKind kind = parse_output(o.get<std::string>());
        if (std::find(cfg.outputs.begin(), cfg.outputs.end(), kind) == cfg.outputs.end()) cfg.outputs.push_back(kind);
      }
    } else {
      invalid("unknown key \"" + key + "\"");
    }
  }
  if (!j.contains("alpha")) invalid("missing \"alpha\"");
  if (!j.contains("mode")) invalid("missing \"mode\"");
  if (!j.contains("m")) invalid("missing \"m\"");

  if (cfg.dim) {
    std::size_t minimum = minimum_dimension(cfg.alpha, cfg.m, cfg.mode, cfg.tolerances);
    if (*cfg.dim < minimum) {
      invalid(fmt::format("dim {} is below the minimum truncation {} for |alpha|^2={}, m={}, mode={}", *cfg.dim,
                          minimum, num(std::norm(cfg.alpha)), cfg.m, to_string(cfg.mode)));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

// Oracle comparison

std::string OracleReport::to_text() const {
  return fmt::format(
      "oracle-check dim={} trials={} seed={}\n"
      "comparisons: {}\n"
      "max_deviation: {}\n"
      "max_norm_defect: {}\n"
      "threshold: {}\n"
      "status: {}\n",
      dim, trials, seed, comparisons, num(max_deviation), num(max_norm_defect), num(threshold),
      passed() ? "pass" : "fail");
}

OracleReport oracle_check(std::size_t dim, std::size_t trials, std::uint64_t seed) {
  if (dim < 3 || dim > 128) throw InvalidArgument("oracle_check needs 3 <= dim <= 128");
  OracleReport report;
  report.dim = dim;
  report.trials = trials;
  report.seed = seed;
  if (trials == 0) return report;

  const HamiltonianEigensystem oracle(dim, 1.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Eigen::VectorXcd e(n);
    Eigen::VectorXcd g(n);
    for (Eigen::Index j = 0; j < n; ++j) e[j] = {normal(rng), normal(rng)};
    for (Eigen::Index j = 0; j < n; ++j) g[j] = {normal(rng), normal(rng)};
    // Closed form and truncated Hamiltonian agree only when nothing is pushed
    // past |N-1>.
    e[n - 1] = 0.0;
    e[n - 2] = 0.0;
    double norm = std::sqrt(e.squaredNorm() + g.squaredNorm());
    QubitFieldState state(FockVector::raw(e / norm), FockVector::raw(g / norm));

    for (double t : kOracleTimes) {
      QubitFieldState closed = evolve_closed_form(state, {1.0, t});
      QubitFieldState dense = oracle.evolve(state, t);
      report.max_deviation = std::max(report.max_deviation, closed.distance(dense));
      report.max_norm_defect = std::max(report.max_norm_defect, std::abs(closed.joint_squared_norm() - 1.0));
      ++report.comparisons;
    }
  }
  return report;
}

// Approximation error table

std::vector<ApproxRow> approx_table(std::size_t max_j) {
  std::vector<ApproxRow> rows;
  for (std::size_t j = 2; j <= max_j; ++j) {
    rows.push_back({j, approx_error(j, Branch::Add), approx_error(j, Branch::Subtract)});
  }
  return rows;
}

void write_approx_table_csv(const std::vector<ApproxRow>& rows, std::ostream& os) {
  os << "j,add_error,subtract_error\n";
  for (const auto& r : rows) os << r.j << ',' << num(r.add_error) << ',' << num(r.subtract_error) << '\n';
}

// Run pipeline

ProtocolResult run_experiment(const ExperimentConfig& config) {
  const std::size_t dim = resolved_dimension(config);
  FockVector psi0 = make_coherent(config.alpha, dim, config.tolerances);
  ProtocolResult result = run_protocol(psi0, config.m, config.mode, config.g, config.tolerances);
  try {
    result.mandel_q_predicted = mandel_q_coherent_predict(config.alpha, config.m, config.mode);
  } catch (const ZeroMeanPhoton&) {
    result.mandel_q_predicted = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

// Emitters

void write_fidelity_csv(const ProtocolResult& result, std::ostream& os) {
  os << "k,fidelity\n";
  for (const auto& p : result.fidelity_series) os << p.k << ',' << num(p.fidelity) << '\n';
}

void write_distribution_csv(const ProtocolResult& result, std::ostream& os) {
  if (result.initial_dist.size() != result.final_dist.size()) {
    throw DimensionMismatch(result.initial_dist.size(), result.final_dist.size());
  }
  os << "j,p_initial,p_final\n";
  for (std::size_t i = 0; i < result.initial_dist.size(); ++i) {
    os << result.initial_dist[i].j << ',' << num(result.initial_dist[i].p) << ',' << num(result.final_dist[i].p)
       << '\n';
  }
}

void write_json(const ProtocolResult& result, std::ostream& os) {
  auto dist = [&](const std::vector<DistributionPoint>& d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i) s += ", ";
      s += fmt::format("[{}, {}]", d[i].j, json_num(d[i].p));
    }
    return s + "]";
  };
  os << "{\n";
  os << "  \"fidelity_series\": [";
  for (std::size_t i = 0; i < result.fidelity_series.size(); ++i) {
    if (i) os << ", ";
    os << '[' << result.fidelity_series[i].k << ", " << json_num(result.fidelity_series[i].fidelity) << ']';
  }
  os << "],\n";
  os << "  \"initial_dist\": " << dist(result.initial_dist) << ",\n";
  os << "  \"final_dist\": " << dist(result.final_dist) << ",\n";
  os << "  \"mean_photon_initial\": " << json_num(result.mean_photon_initial) << ",\n";
  os << "  \"mean_photon_final\": " << json_num(result.mean_photon_final) << ",\n";
  os << "  \"mandel_q_final\": " << json_num(result.mandel_q_final) << ",\n";
  os << "  \"mandel_q_predicted\": " << json_num(result.mandel_q_predicted) << ",\n";
  os << "  \"warnings\": " << json(result.warnings).dump() << "\n";
  os << "}\n";
}

void emit_csv(const ProtocolResult& result, const std::filesystem::path& dir) {
  const auto fid = dir / "fidelity.csv";
  auto f = open_out(fid);
  write_fidelity_csv(result, f);
  finish(f, fid);
  const auto dst = dir / "distribution.csv";
  auto d = open_out(dst);
  write_distribution_csv(result, d);
  finish(d, dst);
}

void emit_json(const ProtocolResult& result, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_json(result, out);
  finish(out, path);
}

ProtocolResult parse_result_json(std::string_view json_text) {
  try {
    json j = json::parse(json_text);
    ProtocolResult r;
    for (const auto& p : j.at("fidelity_series")) r.fidelity_series.push_back({p.at(0).get<int>(), json_double(p.at(1))});
    for (const auto& p : j.at("initial_dist")) r.initial_dist.push_back({p.at(0).get<std::size_t>(), json_double(p.at(1))});
    for (const auto& p : j.at("final_dist")) r.final_dist.push_back({p.at(0).get<std::size_t>(), json_double(p.at(1))});
    r.mean_photon_initial = json_double(j.at("mean_photon_initial"));
    r.mean_photon_final = json_double(j.at("mean_photon_final"));
    r.mandel_q_final = json_double(j.at("mandel_q_final"));
    r.mandel_q_predicted = json_double(j.at("mandel_q_predicted"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw IoFailure(std::string("malformed result JSON: ") + e.what());
  }
}

ProtocolResult load_result_json(const std::filesystem::path& path) { return parse_result_json(read_file(path)); }

std::vector<std::filesystem::path> run_config_file(const std::filesystem::path& config_path,
                                                   const std::filesystem::path& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir.string() + ": " + ec.message());

  ProtocolResult result = run_experiment(cfg);
  std::optional<OracleReport> oracle;
  for (OutputKind kind : cfg.outputs) {
    if (kind == OutputKind::OracleCheck) {
      oracle = oracle_check(64, 100, 42);
      if (!oracle->passed()) {
        result.warnings.push_back("oracle check deviation " + num(oracle->max_deviation) + " exceeds threshold");
      }
    }
  }

  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, auto&& body) {
    const auto path = out_dir / name;
    auto out = open_out(path);
    body(out);
    finish(out, path);
    written.push_back(path);
  };

  write("result.json", [&](std::ostream& os) { write_json(result, os); });
  for (OutputKind kind : cfg.outputs) {
    switch (kind) {
      case OutputKind::FidelitySeries:
        write("fidelity.csv", [&](std::ostream& os) { write_fidelity_csv(result, os); });
        break;
      case OutputKind::FockDist:
        write("distribution.csv", [&](std::ostream& os) { write_distribution_csv(result, os); });
        break;
      case OutputKind::MandelQ:
        write("mandel_q.csv", [&](std::ostream& os) {
          os << "quantity,value\n";
          os << "final," << num(result.mandel_q_final) << '\n';
          os << "predicted," << num(result.mandel_q_predicted) << '\n';
        });
        break;
      case OutputKind::MeanPhoton:
        write("mean_photon.csv", [&](std::ostream& os) {
          os << "quantity,value\n";
          os << "initial," << num(result.mean_photon_initial) << '\n';
          os << "final," << num(result.mean_photon_final) << '\n';
        });
        break;
      case OutputKind::ApproxErrorTable:
        write("approx_error.csv", [&](std::ostream& os) { write_approx_table_csv(approx_table(200), os); });
        break;
      case OutputKind::OracleCheck:
        write("oracle_check.txt", [&](std::ostream& os) { os << oracle->to_text(); });
        break;
    }
  }
  if (oracle && !oracle->passed()) {
    throw Error("oracle check failed: max deviation " + num(oracle->max_deviation));
  }
  return written;
}

}  // namespace tpjc
