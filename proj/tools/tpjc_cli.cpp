// tpjc: run photon addition/subtraction experiments and oracle checks.
//
//   tpjc run <config.json>... --out <dir> [--jobs N]
//   tpjc oracle-check --dim N --trials T --seed S
//   tpjc approx-table --max-j J

#include <cstdint>
#include <exception>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpjc/errors.hpp"
#include "tpjc/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int run_one(const fs::path& config, const fs::path& out_dir, std::string& log) {
  try {
    auto written = tpjc::run_config_file(config, out_dir);
    for (const auto& p : written) log += "wrote " + p.string() + "\n";
    return 0;
  } catch (const tpjc::ConfigInvalid& e) {
    log += config.string() + ": " + e.what() + "\n";
    return 2;
  } catch (const tpjc::TruncationTooSmall& e) {
    log += config.string() + ": truncation too small: " + e.what() + "\n";
    return 3;
  } catch (const std::exception& e) {
    log += config.string() + ": " + e.what() + "\n";
    return 1;
  }
}

int cmd_run(const std::vector<std::string>& configs, const fs::path& out, unsigned jobs) {
  if (configs.size() == 1) {
    std::string log;
    int rc = run_one(configs.front(), out, log);
    (rc == 0 ? std::cout : std::cerr) << log;
    return rc;
  }
  // Batch: each config gets its own subdirectory named after the file stem.
  std::vector<std::string> logs(configs.size());
  std::vector<int> codes(configs.size(), 0);
  jobs = std::max(1u, jobs);
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    std::vector<std::future<int>> running;
    for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i) {
      fs::path cfg = configs[i];
      running.push_back(std::async(std::launch::async, [cfg, &out, &log = logs[i]] {
        return run_one(cfg, out / cfg.stem(), log);
      }));
    }
    for (std::size_t k = 0; k < running.size(); ++k) codes[start + k] = running[k].get();
  }
  int rc = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    (codes[i] == 0 ? std::cout : std::cerr) << logs[i];
    if (codes[i] != 0 && rc == 0) rc = codes[i];
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon Jaynes-Cummings photon addition/subtraction simulator"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out_dir;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Run experiment config(s) and write result files");
  run->add_option("config", configs, "Experiment config JSON file(s)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--jobs", jobs, "Parallel runs in batch mode")->check(CLI::PositiveNumber);

  std::size_t dim = 64;
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  auto* oracle = app.add_subcommand("oracle-check", "Compare closed-form propagator with dense diagonalization");
  oracle->add_option("--dim", dim, "Fock truncation (3..128)")->check(CLI::Range(3, 128));
  oracle->add_option("--trials", trials, "Number of random states");
  oracle->add_option("--seed", seed, "RNG seed");

  std::size_t max_j = 200;
  auto* table = app.add_subcommand("approx-table", "Emit the linearized Rabi-factor error table as CSV");
  table->add_option("--max-j", max_j, "Largest Fock index")->check(CLI::Range(2, 1000000));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(configs, out_dir, jobs);
    if (*oracle) {
      auto report = tpjc::oracle_check(dim, trials, seed);
      std::cout << report.to_text();
      return report.passed() ? 0 : 1;
    }
    if (*table) {
      tpjc::write_approx_table_csv(tpjc::approx_table(max_j), std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
