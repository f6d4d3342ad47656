// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>

#include "test_support.hpp"
#include "tpjc/dynamics.hpp"
#include "tpjc/experiment.hpp"
#include "tpjc/sg_states.hpp"

using namespace tpjc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    out.ok = false;
    out.detail += " (over time budget " + std::to_string(budget_s) + " s)";
  }
  if (!out.ok) ++failures;
  std::printf("[%s] %d. %s: %s [%.2f s]\n", out.ok ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Outcome oracle_equivalence() {
  auto r = oracle_check(64, 100, 42);
  return {r.comparisons == 300 && r.max_deviation <= 1e-8, "max deviation " + sci(r.max_deviation)};
}

Outcome mean_shift() {
  double worst_add = 0.0;
  double worst_sub = 0.0;
  int first_bad_sub = 0;
  auto base5 = make_coherent(5.0, recommended_dimension(5.0, 100));
  auto base12 = make_coherent(12.0, recommended_dimension(12.0, 0));
  for (int m = 1; m <= 50; ++m) {
    worst_add = std::max(worst_add, std::abs(mean_photon(add_photons_ideal(base5, m)) - (25.0 + 2.0 * m)));
    const double dev = std::abs(mean_photon(subtract_photons_ideal(base12, m).state) - (144.0 - 2.0 * m));
    if (dev > 1e-6 && first_bad_sub == 0) first_bad_sub = m;
    worst_sub = std::max(worst_sub, dev);
  }
  std::string detail = "add " + sci(worst_add) + ", subtract " + sci(worst_sub);
  if (first_bad_sub != 0) {
    detail += "; subtract exceeds 1e-6 from m=" + std::to_string(first_bad_sub) +
              " where the base has mass " + sci(low_component_mass(base12, first_bad_sub)) + " below 2m";
  }
  return {worst_add <= 1e-8 && worst_sub <= 1e-6, detail};
}

Outcome mandel() {
  auto base5 = make_coherent(5.0, recommended_dimension(5.0, 100));
  auto base12 = make_coherent(12.0, recommended_dimension(12.0, 0));
  const double q_add = mandel_q(add_photons_ideal(base5, 1));
  const double q_sub = mandel_q(subtract_photons_ideal(base12, 1).state);
  const double d_add = std::abs(q_add + 2.0 / 27.0);
  const double d_sub = std::abs(q_sub - 2.0 / 142.0);
  int wrong_sign = 0;
  for (int m = 1; m <= 50; ++m) {
    if (!(mandel_q(add_photons_ideal(base5, m)) < 0.0)) ++wrong_sign;
    if (!(mandel_q(subtract_photons_ideal(base12, m).state) > 0.0)) ++wrong_sign;
  }
  return {d_add <= 1e-8 && d_sub <= 1e-8 && wrong_sign == 0,
          "add dev " + sci(d_add) + ", subtract dev " + sci(d_sub) + ", sign errors " + std::to_string(wrong_sign)};
}

Outcome eigenvalue() {
  double worst = 0.0;
  for (int m = 1; m <= 5; ++m) {
    worst = std::max(worst, eigen_residual(5.0, m, Mode::Add, 350).matching_residual());
    worst = std::max(worst, eigen_residual(12.0, m, Mode::Subtract, 350).matching_residual());
  }
  return {worst <= 1e-6, "max residual " + sci(worst) + " with eigenvalue (-1)^m alpha"};
}

Outcome trace_hermiticity() {
  auto rho = DensityMatrix::pure(make_coherent(5.0, 256));
  double trace_dev = 0.0;
  double herm = 0.0;
  for (int k = 0; k < 50; ++k) {
    rho = pass_add(rho);
    trace_dev = std::max(trace_dev, std::abs(rho.trace() - Complex(1.0, 0.0)));
    herm = std::max(herm, rho.hermiticity_defect());
  }
  return {trace_dev <= 5e-11 && herm <= 5e-11, "trace dev " + sci(trace_dev) + ", hermiticity " + sci(herm)};
}

Outcome figure(double alpha, Mode mode, std::size_t dim, double target_mean, double mean_tol, bool check_monotone) {
  auto r = run_protocol(make_coherent(alpha, dim), 50, mode);
  bool ok = r.fidelity_series.size() == 51 && std::abs(r.fidelity_series[0].fidelity - 1.0) <= 1e-12;
  const double f1 = r.fidelity_series.size() > 1 ? r.fidelity_series[1].fidelity : 0.0;
  ok = ok && f1 >= 0.99 && std::abs(r.mean_photon_final - target_mean) <= mean_tol;
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < r.fidelity_series.size(); ++k) {
    worst_rise = std::max(worst_rise, r.fidelity_series[k].fidelity - r.fidelity_series[k - 1].fidelity);
  }
  if (check_monotone) ok = ok && worst_rise <= 1e-6;
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean %.6f, F(1) %.8f, F(50) %.8f, max rise %s", r.mean_photon_final, f1,
                r.fidelity_series.back().fidelity, sci(worst_rise).c_str());
  return {ok, buf};
}

Outcome approx_table_check() {
  const double add3 = approx_error(3, Branch::Add);
  const double sub6 = approx_error(6, Branch::Subtract);
  bool decreasing = true;
  for (std::size_t j = 3; j <= 200; ++j) {
    decreasing = decreasing && approx_error(j, Branch::Add) < approx_error(j - 1, Branch::Add) &&
                 approx_error(j, Branch::Subtract) < approx_error(j - 1, Branch::Subtract);
  }
  return {std::abs(add3 - 6.23e-3) <= 1e-5 && std::abs(sub6 - 4.16e-3) <= 1e-5 && decreasing,
          "add(3) " + sci(add3) + ", subtract(6) " + sci(sub6) + (decreasing ? ", decreasing" : ", NOT decreasing")};
}

Outcome shape() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 10;
    const std::size_t dim = 40 + static_cast<std::size_t>(t);
    auto psi = tpjc::testing::random_state(rng, dim, 2 * static_cast<std::size_t>(m));
    auto p_in = fock_distribution(psi);
    auto p_out = fock_distribution(add_photons_ideal(psi, m));
    for (std::size_t j = 0; j < dim; ++j) {
      const double expected = j >= 2 * static_cast<std::size_t>(m) ? p_in[j - 2 * m] : 0.0;
      worst = std::max(worst, std::abs(p_out[j] - expected));
    }
  }
  return {worst == 0.0, "max pointwise deviation " + sci(worst)};
}

}  // namespace

int main() {
  criterion(1, "oracle equivalence", 10.0, oracle_equivalence);
  criterion(2, "exact mean shift", 5.0, mean_shift);
  criterion(3, "Mandel Q", 5.0, mandel);
  criterion(4, "nonlinear eigenvalue", 5.0, eigenvalue);
  criterion(5, "trace and hermiticity", 60.0, trace_hermiticity);
  criterion(6, "figure-1 pipeline", 120.0, [] { return figure(5.0, Mode::Add, 256, 125.0, 0.5, true); });
  criterion(7, "figure-2 pipeline", 180.0, [] { return figure(12.0, Mode::Subtract, 320, 44.0, 1.0, false); });
  criterion(8, "approximation error table", 1.0, approx_table_check);
  criterion(9, "shape preservation", 5.0, shape);
  std::printf("%s: %d failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
