#pragma once

// Resonant two-photon Jaynes-Cummings dynamics in the interaction picture,
//
//   H = g (a^2 sigma_+ + a^dag^2 sigma_-),
//
// with the closed-form propagator, a dense-diagonalization oracle for it, the
// gt = pi addition/subtraction passes as density-matrix maps, and the
// repeated protocol.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tpjc/fock.hpp"
#include "tpjc/sg_states.hpp"
#include "tpjc/tolerances.hpp"

namespace tpjc {

struct TpjcParams {
  double g = 1.0;  // coupling rate, 1/time
  double t = 0.0;  // evolution time

  /// g > 0, t >= 0, both finite.
  void validate() const;

  /// The protocol's pass duration, g t = pi.
  static TpjcParams pi_pulse(double g = 1.0);
};

/// Omega(n) = g sqrt((n + 2)(n + 1)), the rate of the |n, e> <-> |n + 2, g> exchange.
class RabiFrequency {
 public:
  explicit RabiFrequency(double g) : g_(g) {}

  double operator()(std::size_t n) const;
  /// Omega(n - 2) = g sqrt(n (n - 1)); zero for n = 0, 1.
  double lowered(std::size_t n) const;

 private:
  double g_;
};

/// Applies the closed-form propagator:
///   e' = cos[Omega(n) t] e - i sin[Omega(n) t] V^2 g
///   g' = -i V^dag^2 sin[Omega(n) t] e + cos[Omega(n - 2) t] g
/// Throws TruncationTooSmall if the top two excited-branch levels carry more
/// than tol.tail_tol.
QubitFieldState evolve_closed_form(const QubitFieldState& state, const TpjcParams& params,
                                   const Tolerances& tol = {});

/// Dense 2N x 2N interaction Hamiltonian. Basis order: |0,e>..|N-1,e>,
/// |0,g>..|N-1,g>. Requires N >= 3.
Eigen::MatrixXcd build_hamiltonian(std::size_t dim, double g);

/// Eigendecomposition of build_hamiltonian, reusable across states and times.
class HamiltonianEigensystem {
 public:
  /// Throws DiagonalizationFailure if the solver does not converge.
  HamiltonianEigensystem(std::size_t dim, double g);

  std::size_t dim() const noexcept { return dim_; }
  /// exp(-i H t) |state>
  QubitFieldState evolve(const QubitFieldState& state, double t) const;

 private:
  std::size_t dim_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd eigenvectors_;
};

/// exp(-i H t) applied through a fresh eigendecomposition; same preconditions
/// as evolve_closed_form. Independent check of the closed form.
QubitFieldState evolve_oracle(const QubitFieldState& state, const TpjcParams& params,
                              const Tolerances& tol = {});

/// One excited-qubit pass at gt = pi, traced over the qubit:
///   rho' = C rho C + V^dag^2 S rho S V^2,   C, S = cos, sin[pi sqrt((n+2)(n+1))]
/// g only enters through gt = pi and cancels; it is validated and otherwise
/// unused.
DensityMatrix pass_add(const DensityMatrix& rho, double g = 1.0, const Tolerances& tol = {});

/// Ground-qubit pass at gt = pi:
///   rho' = C rho C + V^2 S rho S V^dag^2,   C, S = cos, sin[pi sqrt(n(n-1))]
DensityMatrix pass_subtract(const DensityMatrix& rho, double g = 1.0);

enum class Branch { Add, Subtract };

/// Relative error of the linearized Rabi factor:
///   Add:      |(j + 3/2) - sqrt((j+2)(j+1))| / sqrt((j+2)(j+1))
///   Subtract: |(j - 1/2) - sqrt(j(j-1))|     / sqrt(j(j-1)),  j >= 2
double approx_error(std::size_t j, Branch branch);

struct FidelityPoint {
  int k = 0;
  double fidelity = 0.0;
  bool operator==(const FidelityPoint&) const = default;
};

struct DistributionPoint {
  std::size_t j = 0;
  double p = 0.0;
  bool operator==(const DistributionPoint&) const = default;
};

struct ProtocolResult {
  std::vector<FidelityPoint> fidelity_series;
  std::vector<DistributionPoint> initial_dist;
  std::vector<DistributionPoint> final_dist;
  double mean_photon_initial = 0.0;
  double mean_photon_final = 0.0;
  double mandel_q_final = 0.0;
  double mandel_q_predicted = 0.0;
  std::vector<std::string> warnings;
};

/// Bitwise comparison of every field; NaN compares equal to NaN.
bool identical(const ProtocolResult& a, const ProtocolResult& b);

/// Applies `m` passes starting from |psi0><psi0|. After pass k the fidelity
/// against the ideal k-step state is recorded, k = 0..m. mandel_q_predicted
/// is the shape-preserving shift prediction from psi0's statistics; it and
/// mandel_q_final are NaN (with a warning) when the mean photon number is zero.
ProtocolResult run_protocol(const FockVector& psi0, int m, Mode mode, double g = 1.0, const Tolerances& tol = {});

}  // namespace tpjc
