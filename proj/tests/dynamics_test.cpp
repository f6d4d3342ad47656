#include "tpjc/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tpjc/errors.hpp"

using namespace tpjc;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

QubitFieldState random_joint(std::mt19937_64& rng, std::size_t dim) {
  auto e = tpjc::testing::random_state(rng, dim, 2);
  auto g = tpjc::testing::random_state(rng, dim);
  return {e * Complex(std::sqrt(0.3)), g * Complex(std::sqrt(0.7))};
}

// Reduced field state Tr_qubit |s><s|.
DensityMatrix trace_out_qubit(const QubitFieldState& s) {
  const auto& e = s.excited().amplitudes();
  const auto& g = s.ground().amplitudes();
  return DensityMatrix::from_matrix(e * e.adjoint() + g * g.adjoint());
}

}  // namespace

TEST(tpjc_params, validation) {
  EXPECT_NO_THROW((TpjcParams{1.0, 0.0}.validate()));
  EXPECT_THROW((TpjcParams{0.0, 1.0}.validate()), InvalidArgument);
  EXPECT_THROW((TpjcParams{1.0, -1.0}.validate()), InvalidArgument);
  EXPECT_NEAR(TpjcParams::pi_pulse(2.0).t, kPi / 2.0, 1e-15);
}

TEST(rabi_frequency, values) {
  RabiFrequency omega(0.5);
  EXPECT_NEAR(omega(0), 0.5 * std::sqrt(2.0), 1e-15);
  EXPECT_EQ(omega.lowered(0), 0.0);
  EXPECT_EQ(omega.lowered(1), 0.0);
  EXPECT_NEAR(omega.lowered(4), omega(2), 1e-15);
  for (std::size_t n = 0; n < 100; ++n) EXPECT_LT(omega(n), omega(n + 1));
}

TEST(evolve_closed_form, zero_time_is_identity) {
  std::mt19937_64 rng(1);
  auto s = random_joint(rng, 20);
  EXPECT_EQ(evolve_closed_form(s, {1.0, 0.0}).distance(s), 0.0);
}

TEST(evolve_closed_form, vacuum_excited_block) {
  auto s = QubitFieldState::with_excited(FockVector::basis(0, 6));
  for (double gt : {0.2, 1.0, kPi}) {
    auto out = evolve_closed_form(s, {1.0, gt});
    EXPECT_NEAR(std::abs(out.excited()[0] - std::cos(std::sqrt(2.0) * gt)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.ground()[2] - (-kI * std::sin(std::sqrt(2.0) * gt))), 0.0, 1e-15);
    EXPECT_LE(out.distance(evolve_oracle(s, {1.0, gt})), 1e-12);
  }
}

TEST(evolve_closed_form, dark_ground_states) {
  for (std::size_t n : {0u, 1u}) {
    auto s = QubitFieldState::with_ground(FockVector::basis(n, 6));
    EXPECT_EQ(evolve_closed_form(s, {1.0, 3.7}).distance(s), 0.0);
  }
}

TEST(evolve_closed_form, guards_top_of_space) {
  auto s = QubitFieldState::with_excited(FockVector::basis(5, 6));
  EXPECT_THROW(evolve_closed_form(s, {1.0, 1.0}), TruncationTooSmall);
}

TEST(build_hamiltonian, structure) {
  const std::size_t n = 8;
  auto h = build_hamiltonian(n, 1.0);
  ASSERT_EQ(h.rows(), 16);
  EXPECT_NEAR(std::abs(h(8 + 2, 0) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(h.topLeftCorner(8, 8).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(h.bottomRightCorner(8, 8).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(h.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(build_hamiltonian(2, 1.0), InvalidArgument);
}

TEST(evolve_oracle, agrees_with_closed_form) {
  std::mt19937_64 rng(2024);
  const HamiltonianEigensystem oracle(32, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_joint(rng, 32);
    for (double gt : {0.3, 1.1, kPi, 4.4, 7.1}) {
      worst = std::max(worst, evolve_closed_form(s, {1.0, gt}).distance(oracle.evolve(s, gt)));
    }
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(evolve_oracle, unitary_and_identity) {
  std::mt19937_64 rng(5);
  auto s = random_joint(rng, 64);
  EXPECT_LE(evolve_oracle(s, {1.0, 0.0}).distance(s), 1e-12);
  EXPECT_NEAR(evolve_oracle(s, TpjcParams::pi_pulse()).joint_squared_norm(), 1.0, 1e-10);
  EXPECT_NEAR(evolve_closed_form(s, TpjcParams::pi_pulse()).joint_squared_norm(), 1.0, 1e-10);
}

TEST(evolve_oracle, concurrent_eigensystems_match) {
  std::mt19937_64 rng(8);
  auto s = random_joint(rng, 40);
  auto reference = HamiltonianEigensystem(40, 1.0).evolve(s, 2.5);
  std::vector<double> deviations(4);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    workers.emplace_back([&, i] { deviations[i] = HamiltonianEigensystem(40, 1.0).evolve(s, 2.5).distance(reference); });
  }
  for (auto& w : workers) w.join();
  for (double d : deviations) EXPECT_EQ(d, 0.0);
}

TEST(pass_add, single_fock_state) {
  auto out = pass_add(DensityMatrix::pure(FockVector::basis(25, 40)));
  // cos^2 and sin^2 of pi sqrt(27 * 26), 40-digit reference values.
  EXPECT_NEAR(out(25, 25).real(), 0.0002196208368336236, 1e-14);
  EXPECT_NEAR(out(27, 27).real(), 0.9997803791631664, 1e-14);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-15);
}

TEST(pass_add, equals_reduced_closed_form_evolution) {
  std::mt19937_64 rng(17);
  auto psi = tpjc::testing::random_state(rng, 30, 2);
  auto via_map = pass_add(DensityMatrix::pure(psi));
  auto evolved = evolve_closed_form(QubitFieldState::with_excited(psi), TpjcParams::pi_pulse());
  EXPECT_LE((via_map.elements() - trace_out_qubit(evolved).elements()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(pass_subtract, equals_reduced_closed_form_evolution) {
  std::mt19937_64 rng(18);
  auto psi = tpjc::testing::random_state(rng, 30);
  auto via_map = pass_subtract(DensityMatrix::pure(psi));
  auto evolved = evolve_closed_form(QubitFieldState::with_ground(psi), TpjcParams::pi_pulse());
  EXPECT_LE((via_map.elements() - trace_out_qubit(evolved).elements()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(pass_maps, trace_and_hermiticity) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    auto rho = tpjc::testing::random_density(rng, 24, 4, 2);
    auto a = pass_add(rho);
    auto s = pass_subtract(rho);
    EXPECT_NEAR(std::abs(a.trace() - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.trace() - 1.0), 0.0, 1e-12);
    EXPECT_LE(a.hermiticity_defect(), 1e-12);
    EXPECT_LE(s.hermiticity_defect(), 1e-12);
    EXPECT_GE(a.min_eigenvalue(), -1e-8);
    EXPECT_GE(s.min_eigenvalue(), -1e-8);
  }
}

TEST(pass_subtract, dark_states_unchanged) {
  for (std::size_t n : {0u, 1u}) {
    auto rho = DensityMatrix::pure(FockVector::basis(n, 10));
    EXPECT_EQ((pass_subtract(rho).elements() - rho.elements()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(pass_add, guards_top_of_space) {
  EXPECT_THROW(pass_add(DensityMatrix::pure(FockVector::basis(9, 10))), TruncationTooSmall);
  EXPECT_THROW(pass_add(DensityMatrix::pure(FockVector::basis(1, 10)), 0.0), InvalidArgument);
}

TEST(approx_error, reference_points) {
  EXPECT_NEAR(approx_error(3, Branch::Add), 0.006230589874905363, 1e-15);
  EXPECT_NEAR(approx_error(6, Branch::Subtract), 0.004158022092804541, 1e-15);
  EXPECT_LT(approx_error(100, Branch::Add), 1.3e-5);
  EXPECT_NEAR(approx_error(100, Branch::Add), 1.213349268698386e-05, 1e-15);
  EXPECT_THROW(approx_error(1, Branch::Subtract), InvalidArgument);
}

TEST(approx_error, asymptotic_one_over_8j2) {
  for (std::size_t j : {1000u, 10000u}) {
    double jd = static_cast<double>(j);
    EXPECT_NEAR(approx_error(j, Branch::Add) * 8.0 * jd * jd, 1.0, 5.0 / jd);
    EXPECT_NEAR(approx_error(j, Branch::Subtract) * 8.0 * jd * jd, 1.0, 5.0 / jd);
  }
}

TEST(single_pass, excited_start_approximates_added_state) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto psi = tpjc::testing::random_state(rng, 40, 2, 3);
    auto out = evolve_closed_form(QubitFieldState::with_excited(psi), TpjcParams::pi_pulse());
    double eps = 0.0;
    for (std::size_t j = 3; j < 40; ++j) {
      double delta = kPi * RabiFrequency(1.0)(j) * approx_error(j, Branch::Add);
      eps += std::norm(psi[j]) * delta * delta;
    }
    double ov = std::norm(overlap(add_photons_ideal(psi, 1), out.ground()));
    EXPECT_GE(ov, 1.0 - eps);
    // Qubit flips to |g>: what stays in |e> is exactly the missing overlap scale.
    EXPECT_LE(out.excited().squared_norm(), eps);
  }
}

TEST(single_pass, ground_start_approximates_subtracted_state) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    auto psi = tpjc::testing::random_state(rng, 40, 0, 6);
    auto out = evolve_closed_form(QubitFieldState::with_ground(psi), TpjcParams::pi_pulse());
    double eps = 0.0;
    for (std::size_t j = 6; j < 40; ++j) {
      double delta = kPi * RabiFrequency(1.0).lowered(j) * approx_error(j, Branch::Subtract);
      eps += std::norm(psi[j]) * delta * delta;
    }
    double ov = std::norm(overlap(subtract_photons_ideal(psi, 1).state, out.excited()));
    EXPECT_GE(ov, 1.0 - eps);
    EXPECT_LE(out.ground().squared_norm(), eps);
  }
}

TEST(run_protocol, zero_repetitions) {
  auto psi = make_coherent(3.0, 60);
  auto r = run_protocol(psi, 0, Mode::Add);
  ASSERT_EQ(r.fidelity_series.size(), 1u);
  EXPECT_NEAR(r.fidelity_series[0].fidelity, 1.0, 1e-14);
  auto p = fock_distribution(psi);
  for (std::size_t j = 0; j < p.size(); ++j) EXPECT_NEAR(r.final_dist[j].p, p[j], 1e-16);
  EXPECT_EQ(r.initial_dist, r.final_dist);
}

TEST(run_protocol, short_add_run) {
  auto psi = make_coherent(4.0, 80);
  auto r = run_protocol(psi, 5, Mode::Add);
  ASSERT_EQ(r.fidelity_series.size(), 6u);
  EXPECT_NEAR(r.mean_photon_final, 26.0, 0.1);
  for (const auto& f : r.fidelity_series) {
    EXPECT_GE(f.fidelity, 0.99);
    EXPECT_LE(f.fidelity, 1.0);
  }
  EXPECT_NEAR(r.mandel_q_predicted, mandel_q_coherent_predict(4.0, 5, Mode::Add), 1e-9);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(run_protocol, subtract_warns_when_renormalizing) {
  auto psi = make_coherent(2.0, 40);
  auto r = run_protocol(psi, 2, Mode::Subtract);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("renormalized"), std::string::npos);
}

TEST(run_protocol, rejects_bad_inputs) {
  auto psi = make_coherent(2.0, 40);
  EXPECT_THROW(run_protocol(psi, -1, Mode::Add), InvalidArgument);
  EXPECT_THROW(run_protocol(psi * Complex(2.0), 1, Mode::Add), InvalidArgument);
  EXPECT_THROW(run_protocol(psi, 30, Mode::Add), TruncationTooSmall);
}

TEST(run_protocol, zero_mean_reports_nan_with_warning) {
  auto r = run_protocol(FockVector::basis(0, 10), 0, Mode::Subtract);
  EXPECT_TRUE(std::isnan(r.mandel_q_final));
  EXPECT_TRUE(std::isnan(r.mandel_q_predicted));
  EXPECT_EQ(r.warnings.size(), 2u);
}
