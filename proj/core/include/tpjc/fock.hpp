#pragma once

// Truncated Fock-space states and the elementary field operators.
//
// Every operator here is applied as an index shift or diagonal scaling; no
// dense operator matrices are built. Constructors normalize, raw operator
// applications do not.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tpjc/tolerances.hpp"

namespace tpjc {

using Complex = std::complex<double>;

/// Amplitudes c_0..c_{N-1} of a pure field state over |0>..|N-1>.
class FockVector {
 public:
  /// Normalized basis state |n> in a space of dimension `dim`.
  static FockVector basis(std::size_t n, std::size_t dim);

  /// Normalizes the given amplitudes. Throws InvalidArgument on an empty or
  /// zero vector.
  static FockVector normalized(Eigen::VectorXcd amps);
  static FockVector normalized(std::span<const Complex> amps);

  /// Wraps amplitudes as-is. Used for unnormalized operator images.
  static FockVector raw(Eigen::VectorXcd amps);
  static FockVector zero(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  std::span<const Complex> view() const noexcept { return {amps_.data(), dim()}; }
  Complex operator[](std::size_t j) const { return amps_[static_cast<Eigen::Index>(j)]; }

  double squared_norm() const { return amps_.squaredNorm(); }
  double norm() const { return amps_.norm(); }
  bool is_normalized(double norm_tol) const;

  /// Copy rescaled to unit norm.
  FockVector renormalized() const;

  FockVector operator*(Complex s) const { return raw(amps_ * s); }
  FockVector operator+(const FockVector& o) const;
  FockVector operator-(const FockVector& o) const;

 private:
  explicit FockVector(Eigen::VectorXcd amps) : amps_(std::move(amps)) {}
  Eigen::VectorXcd amps_;
};

/// N x N field density matrix rho_{j,k}.
class DensityMatrix {
 public:
  /// |psi><psi|.
  static DensityMatrix pure(const FockVector& psi);

  /// Wraps a matrix without validation; call check_valid() when the source
  /// is untrusted.
  static DensityMatrix from_matrix(Eigen::MatrixXcd elems);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(elems_.rows()); }
  const Eigen::MatrixXcd& elements() const noexcept { return elems_; }
  Complex operator()(std::size_t j, std::size_t k) const {
    return elems_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }

  Complex trace() const { return elems_.trace(); }
  /// max_{j,k} |rho_{j,k} - conj(rho_{k,j})|
  double hermiticity_defect() const;
  /// Smallest eigenvalue of the Hermitian part. O(N^3); for tests and debug checks.
  double min_eigenvalue() const;

  /// Throws InvalidArgument if the trace or Hermiticity invariants fail
  /// (and, when `check_psd` is set, positivity).
  void check_valid(const Tolerances& tol, bool check_psd = false) const;

 private:
  explicit DensityMatrix(Eigen::MatrixXcd elems) : elems_(std::move(elems)) {}
  Eigen::MatrixXcd elems_;
};

/// Joint qubit-field pure state: field amplitudes attached to |e> and |g>.
/// Neither component is individually normalized.
class QubitFieldState {
 public:
  QubitFieldState(FockVector excited, FockVector ground);

  static QubitFieldState with_excited(const FockVector& field);
  static QubitFieldState with_ground(const FockVector& field);

  const FockVector& excited() const noexcept { return excited_; }
  const FockVector& ground() const noexcept { return ground_; }
  std::size_t dim() const noexcept { return excited_.dim(); }

  double joint_squared_norm() const { return excited_.squared_norm() + ground_.squared_norm(); }
  /// Euclidean distance between the stacked (e, g) amplitude vectors.
  double distance(const QubitFieldState& other) const;

 private:
  FockVector excited_;
  FockVector ground_;
};

/// Poisson mass sum_{j >= dim} e^{-|a|^2} |a|^{2j} / j! lost by truncating |alpha>.
double coherent_tail_mass(Complex alpha, std::size_t dim);

/// Smallest dimension whose coherent tail mass is at most `tail_tol`.
std::size_t coherent_minimum_dimension(Complex alpha, double tail_tol);

/// Default truncation ceil(|a|^2 + 8|a| + photon_gain + 16): the Poisson bulk
/// out to eight standard deviations plus the largest photon gain of the run.
std::size_t recommended_dimension(double alpha_abs, std::size_t photon_gain);

/// Truncated, renormalized coherent state. Throws TruncationTooSmall when the
/// discarded tail mass exceeds tol.tail_tol.
FockVector make_coherent(Complex alpha, std::size_t dim, const Tolerances& tol = {});

// Susskind-Glogower lowering V|n> = |n-1>, with V|0> = 0.
FockVector apply_lower(const FockVector& psi, std::size_t steps = 1);

// Raising V^dag|n> = |n+1>. The components pushed past |N-1> must carry mass
// <= tol.tail_tol, otherwise TruncationTooSmall.
FockVector apply_raise(const FockVector& psi, std::size_t steps = 1, const Tolerances& tol = {});

// (-1)^n
FockVector apply_parity(const FockVector& psi);

// a|n> = sqrt(n)|n-1>
FockVector apply_annihilation(const FockVector& psi);

// n|n> = n|n>
FockVector apply_number(const FockVector& psi);

/// V^k rho V^dag^k
DensityMatrix apply_lower(const DensityMatrix& rho, std::size_t steps = 1);
/// V^dag^k rho V^k, with the same top-of-space mass guard as the vector form.
DensityMatrix apply_raise(const DensityMatrix& rho, std::size_t steps = 1, const Tolerances& tol = {});

/// Mass carried by the top `count` Fock levels.
double top_mass(const FockVector& psi, std::size_t count);
double top_mass(const DensityMatrix& rho, std::size_t count);

/// <a|b>
Complex overlap(const FockVector& a, const FockVector& b);

std::vector<double> fock_distribution(const FockVector& psi);
std::vector<double> fock_distribution(const DensityMatrix& rho);

/// sum_j j p_j
double mean_photon(const FockVector& psi);
double mean_photon(const DensityMatrix& rho);
/// sum_j j^2 p_j
double photon_moment2(const FockVector& psi);
double photon_moment2(const DensityMatrix& rho);

/// <target|rho|target>, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const FockVector& target);

}  // namespace tpjc
