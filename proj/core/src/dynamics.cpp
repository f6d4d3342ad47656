#include "tpjc/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "tpjc/errors.hpp"

namespace tpjc {

namespace {

using Eigen::Index;

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

Index idx(std::size_t j) { return static_cast<Index>(j); }

double add_factor(std::size_t n) {
  double nd = static_cast<double>(n);
  return std::sqrt((nd + 2.0) * (nd + 1.0));
}

double subtract_factor(std::size_t n) {
  if (n < 2) return 0.0;
  double nd = static_cast<double>(n);
  return std::sqrt(nd * (nd - 1.0));
}

void require_excited_headroom(const QubitFieldState& state, const Tolerances& tol) {
  double lost = top_mass(state.excited(), 2);
  if (lost > tol.tail_tol) {
    throw TruncationTooSmall("excited-branch mass " + std::to_string(lost) + " in the top two levels", state.dim(),
                             state.dim() + 2);
  }
}

void require_coupling(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("coupling g must be positive and finite");
}

bool same_bits(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

void TpjcParams::validate() const {
  require_coupling(g);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("evolution time t must be non-negative and finite");
}

TpjcParams TpjcParams::pi_pulse(double g) { return {g, kPi / g}; }

double RabiFrequency::operator()(std::size_t n) const { return g_ * add_factor(n); }

double RabiFrequency::lowered(std::size_t n) const { return g_ * subtract_factor(n); }

QubitFieldState evolve_closed_form(const QubitFieldState& state, const TpjcParams& params, const Tolerances& tol) {
  params.validate();
  require_excited_headroom(state, tol);
  const std::size_t n = state.dim();
  const RabiFrequency omega(params.g);
  const auto& e = state.excited();
  const auto& gr = state.ground();

  Eigen::VectorXcd e_out(idx(n));
  Eigen::VectorXcd g_out(idx(n));
  for (std::size_t j = 0; j < n; ++j) {
    double w = omega(j) * params.t;
    Complex from_ground = (j + 2 < n) ? gr[j + 2] : Complex(0.0);
    e_out[idx(j)] = std::cos(w) * e[j] - kI * std::sin(w) * from_ground;

    double wl = omega.lowered(j) * params.t;
    Complex from_excited = (j >= 2) ? std::sin(omega(j - 2) * params.t) * e[j - 2] : Complex(0.0);
    g_out[idx(j)] = -kI * from_excited + std::cos(wl) * gr[j];
  }
  return {FockVector::raw(std::move(e_out)), FockVector::raw(std::move(g_out))};
}

Eigen::MatrixXcd build_hamiltonian(std::size_t dim, double g) {
  if (dim < 3) throw InvalidArgument("build_hamiltonian needs dim >= 3");
  const Index n = idx(dim);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const RabiFrequency omega(g);
  for (std::size_t j = 0; j + 2 < dim; ++j) {
    // <j+2, g| a^dag^2 sigma_- |j, e> and its conjugate
    Index e_row = idx(j);
    Index g_row = n + idx(j + 2);
    h(g_row, e_row) = omega(j);
    h(e_row, g_row) = omega(j);
  }
  return h;
}

HamiltonianEigensystem::HamiltonianEigensystem(std::size_t dim, double g) : dim_(dim) {
  require_coupling(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(build_hamiltonian(dim, g));
  if (solver.info() != Eigen::Success) {
    throw DiagonalizationFailure("Hamiltonian eigendecomposition did not converge (dim=" + std::to_string(dim) + ")");
  }
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

QubitFieldState HamiltonianEigensystem::evolve(const QubitFieldState& state, double t) const {
  if (state.dim() != dim_) throw DimensionMismatch(state.dim(), dim_);
  const Index n = idx(dim_);
  Eigen::VectorXcd v(2 * n);
  v << state.excited().amplitudes(), state.ground().amplitudes();

  Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * v;
  for (Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::exp(-kI * (energies_[k] * t));
  Eigen::VectorXcd w = eigenvectors_ * coeffs;
  return {FockVector::raw(w.head(n)), FockVector::raw(w.tail(n))};
}

QubitFieldState evolve_oracle(const QubitFieldState& state, const TpjcParams& params, const Tolerances& tol) {
  params.validate();
  require_excited_headroom(state, tol);
  return HamiltonianEigensystem(state.dim(), params.g).evolve(state, params.t);
}

DensityMatrix pass_add(const DensityMatrix& rho, double g, const Tolerances& tol) {
  require_coupling(g);
  const std::size_t n = rho.dim();
  double lost = top_mass(rho, 2);
  if (lost > tol.tail_tol) {
    throw TruncationTooSmall("addition pass pushes mass " + std::to_string(lost) + " out of the truncated space", n,
                             n + 2);
  }
  Eigen::VectorXd c(idx(n));
  Eigen::VectorXd s(idx(n));
  for (std::size_t j = 0; j < n; ++j) {
    double w = kPi * add_factor(j);
    c[idx(j)] = std::cos(w);
    s[idx(j)] = std::sin(w);
  }
  const auto& r = rho.elements();
  Eigen::MatrixXcd out = c.asDiagonal() * r * c.asDiagonal();
  if (n > 2) {
    const Index keep = idx(n - 2);
    out.bottomRightCorner(keep, keep) +=
        s.head(keep).asDiagonal() * r.topLeftCorner(keep, keep) * s.head(keep).asDiagonal();
  }
  return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix pass_subtract(const DensityMatrix& rho, double g) {
  require_coupling(g);
  const std::size_t n = rho.dim();
  Eigen::VectorXd c(idx(n));
  Eigen::VectorXd s(idx(n));
  for (std::size_t j = 0; j < n; ++j) {
    double w = kPi * subtract_factor(j);
    c[idx(j)] = std::cos(w);
    s[idx(j)] = std::sin(w);
  }
  const auto& r = rho.elements();
  Eigen::MatrixXcd out = c.asDiagonal() * r * c.asDiagonal();
  if (n > 2) {
    const Index keep = idx(n - 2);
    out.topLeftCorner(keep, keep) +=
        s.tail(keep).asDiagonal() * r.bottomRightCorner(keep, keep) * s.tail(keep).asDiagonal();
  }
  return DensityMatrix::from_matrix(std::move(out));
}

double approx_error(std::size_t j, Branch branch) {
  double jd = static_cast<double>(j);
  if (branch == Branch::Add) {
    double exact = add_factor(j);
    return std::abs((jd + 1.5) - exact) / exact;
  }
  if (j < 2) throw InvalidArgument("subtract-branch approximation error needs j >= 2");
  double exact = subtract_factor(j);
  return std::abs((jd - 0.5) - exact) / exact;
}

bool identical(const ProtocolResult& a, const ProtocolResult& b) {
  auto same_series = [](const auto& x, const auto& y, auto&& same_point) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!same_point(x[i], y[i])) return false;
    }
    return true;
  };
  auto same_fid = [](const FidelityPoint& x, const FidelityPoint& y) {
    return x.k == y.k && same_bits(x.fidelity, y.fidelity);
  };
  auto same_dist = [](const DistributionPoint& x, const DistributionPoint& y) {
    return x.j == y.j && same_bits(x.p, y.p);
  };
  return same_series(a.fidelity_series, b.fidelity_series, same_fid) &&
         same_series(a.initial_dist, b.initial_dist, same_dist) &&
         same_series(a.final_dist, b.final_dist, same_dist) &&
         same_bits(a.mean_photon_initial, b.mean_photon_initial) &&
         same_bits(a.mean_photon_final, b.mean_photon_final) && same_bits(a.mandel_q_final, b.mandel_q_final) &&
         same_bits(a.mandel_q_predicted, b.mandel_q_predicted) && a.warnings == b.warnings;
}

ProtocolResult run_protocol(const FockVector& psi0, int m, Mode mode, double g, const Tolerances& tol) {
  tol.validate();
  require_coupling(g);
  if (m < 0) throw InvalidArgument("repetition count m must be non-negative");
  if (!psi0.is_normalized(tol.norm_tol)) throw InvalidArgument("initial field state is not normalized");

  ProtocolResult result;
  auto to_points = [](const std::vector<double>& p) {
    std::vector<DistributionPoint> pts(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) pts[j] = {j, p[j]};
    return pts;
  };

  DensityMatrix rho = DensityMatrix::pure(psi0);
  result.fidelity_series.reserve(static_cast<std::size_t>(m) + 1);
  result.fidelity_series.push_back({0, fidelity(rho, psi0)});

  int first_renormalized = -1;
  double worst_top_mass = 0.0;
  for (int k = 1; k <= m; ++k) {
    FockVector ideal = psi0;
    if (mode == Mode::Add) {
      rho = pass_add(rho, g, tol);
      ideal = add_photons_ideal(psi0, k, tol);
    } else {
      rho = pass_subtract(rho, g);
      SubtractedState sub = subtract_photons_ideal(psi0, k, tol);
      if (sub.renormalized && first_renormalized < 0) first_renormalized = k;
      ideal = std::move(sub.state);
    }
    worst_top_mass = std::max(worst_top_mass, top_mass(rho, 2));
    result.fidelity_series.push_back({k, fidelity(rho, ideal)});
  }

  result.initial_dist = to_points(fock_distribution(psi0));
  result.final_dist = to_points(fock_distribution(rho));
  result.mean_photon_initial = mean_photon(psi0);
  result.mean_photon_final = mean_photon(rho);

  if (first_renormalized >= 0) {
    result.warnings.push_back("ideal subtracted state renormalized from k=" + std::to_string(first_renormalized) +
                              ": low-component mass exceeds low_mass_tol");
  }
  if (worst_top_mass > 0.1 * tol.tail_tol) {
    result.warnings.push_back("top-of-space mass reached " + std::to_string(worst_top_mass) +
                              "; truncation close to tail_tol");
  }
  double drift = std::abs(rho.trace() - 1.0);
  if (drift > tol.norm_tol) {
    result.warnings.push_back("trace drifted by " + std::to_string(drift) + " over the protocol");
  }

  try {
    result.mandel_q_final = mandel_q(rho);
  } catch (const ZeroMeanPhoton&) {
    result.mandel_q_final = std::nan("");
    result.warnings.push_back("final state has zero mean photon number; Mandel Q undefined");
  }
  try {
    double q0 = mandel_q(psi0);
    result.mandel_q_predicted = mandel_q_shift_predict(q0, result.mean_photon_initial, m, mode);
  } catch (const ZeroMeanPhoton&) {
    result.mandel_q_predicted = std::nan("");
    result.warnings.push_back("predicted Mandel Q undefined: zero mean photon number");
  }
  return result;
}

}  // namespace tpjc
