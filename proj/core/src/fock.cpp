#include "tpjc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpjc/errors.hpp"

namespace tpjc {

namespace {

using Eigen::Index;

Index idx(std::size_t j) { return static_cast<Index>(j); }

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch(a, b);
}

// log of the Poisson weight e^{-x} x^j / j!
double log_poisson(double x, std::size_t j) {
  double jd = static_cast<double>(j);
  return -x + jd * std::log(x) - std::lgamma(jd + 1.0);
}

}  // namespace

void Tolerances::validate() const {
  for (double v : {norm_tol, herm_tol, psd_tol, tail_tol, low_mass_tol}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("tolerances must be finite and non-negative");
    }
  }
}

// FockVector

FockVector FockVector::basis(std::size_t n, std::size_t dim) {
  if (n >= dim) {
    throw InvalidArgument("basis index " + std::to_string(n) + " outside dim " + std::to_string(dim));
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(idx(dim));
  v[idx(n)] = 1.0;
  return FockVector(std::move(v));
}

FockVector FockVector::normalized(Eigen::VectorXcd amps) {
  if (amps.size() == 0) throw InvalidArgument("FockVector needs dim >= 1");
  double n = amps.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
  amps /= n;
  return FockVector(std::move(amps));
}

FockVector FockVector::normalized(std::span<const Complex> amps) {
  Eigen::VectorXcd v(idx(amps.size()));
  std::copy(amps.begin(), amps.end(), v.data());
  return normalized(std::move(v));
}

FockVector FockVector::raw(Eigen::VectorXcd amps) {
  if (amps.size() == 0) throw InvalidArgument("FockVector needs dim >= 1");
  return FockVector(std::move(amps));
}

FockVector FockVector::zero(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("FockVector needs dim >= 1");
  return FockVector(Eigen::VectorXcd::Zero(idx(dim)));
}

bool FockVector::is_normalized(double norm_tol) const {
  return std::abs(squared_norm() - 1.0) <= norm_tol;
}

FockVector FockVector::renormalized() const { return normalized(amps_); }

FockVector FockVector::operator+(const FockVector& o) const {
  require_same_dim(dim(), o.dim());
  return raw(amps_ + o.amps_);
}

FockVector FockVector::operator-(const FockVector& o) const {
  require_same_dim(dim(), o.dim());
  return raw(amps_ - o.amps_);
}

// DensityMatrix

DensityMatrix DensityMatrix::pure(const FockVector& psi) {
  const auto& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd elems) {
  if (elems.rows() == 0 || elems.rows() != elems.cols()) {
    throw InvalidArgument("density matrix must be square with dim >= 1");
  }
  return DensityMatrix(std::move(elems));
}

double DensityMatrix::hermiticity_defect() const {
  return (elems_ - elems_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd h = 0.5 * (elems_ + elems_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidArgument("eigenvalue computation failed");
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::check_valid(const Tolerances& tol, bool check_psd) const {
  if (std::abs(trace() - 1.0) > tol.norm_tol) {
    throw InvalidArgument("density matrix trace deviates from 1 by " + std::to_string(std::abs(trace() - 1.0)));
  }
  if (hermiticity_defect() > tol.herm_tol) {
    throw InvalidArgument("density matrix is not Hermitian (defect " + std::to_string(hermiticity_defect()) + ")");
  }
  if (check_psd && min_eigenvalue() < -tol.psd_tol) {
    throw InvalidArgument("density matrix has a negative eigenvalue " + std::to_string(min_eigenvalue()));
  }
}

// QubitFieldState

QubitFieldState::QubitFieldState(FockVector excited, FockVector ground)
    : excited_(std::move(excited)), ground_(std::move(ground)) {
  require_same_dim(excited_.dim(), ground_.dim());
}

QubitFieldState QubitFieldState::with_excited(const FockVector& field) {
  return {field, FockVector::zero(field.dim())};
}

QubitFieldState QubitFieldState::with_ground(const FockVector& field) {
  return {FockVector::zero(field.dim()), field};
}

double QubitFieldState::distance(const QubitFieldState& other) const {
  require_same_dim(dim(), other.dim());
  double d2 = (excited_.amplitudes() - other.excited_.amplitudes()).squaredNorm() +
              (ground_.amplitudes() - other.ground_.amplitudes()).squaredNorm();
  return std::sqrt(d2);
}

// Coherent states

double coherent_tail_mass(Complex alpha, std::size_t dim) {
  const double x = std::norm(alpha);
  if (x == 0.0) return dim == 0 ? 1.0 : 0.0;
  const double xd = static_cast<double>(dim);
  if (xd <= x) {
    // Bulk not yet covered: complement of the retained sum is accurate here.
    double kept = 0.0;
    for (std::size_t j = 0; j < dim; ++j) kept += std::exp(log_poisson(x, j));
    return std::max(0.0, 1.0 - kept);
  }
  // Past the mode the terms decrease monotonically; sum them directly so small
  // tails are not lost to cancellation.
  double tail = 0.0;
  for (std::size_t j = dim;; ++j) {
    double term = std::exp(log_poisson(x, j));
    tail += term;
    if (term <= 1e-18 * tail || term == 0.0) break;
  }
  return tail;
}

std::size_t coherent_minimum_dimension(Complex alpha, double tail_tol) {
  std::size_t n = 1;
  while (coherent_tail_mass(alpha, n) > tail_tol) ++n;
  return n;
}

std::size_t recommended_dimension(double alpha_abs, std::size_t photon_gain) {
  double n = alpha_abs * alpha_abs + 8.0 * alpha_abs + static_cast<double>(photon_gain) + 16.0;
  return static_cast<std::size_t>(std::ceil(n));
}

FockVector make_coherent(Complex alpha, std::size_t dim, const Tolerances& tol) {
  if (dim == 0) throw InvalidArgument("make_coherent needs dim >= 1");
  double tail = coherent_tail_mass(alpha, dim);
  if (tail > tol.tail_tol) {
    throw TruncationTooSmall("coherent state tail mass " + std::to_string(tail) + " exceeds tail_tol", dim,
                             coherent_minimum_dimension(alpha, tol.tail_tol));
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(idx(dim));
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c[0] = 1.0;
    return FockVector::normalized(std::move(c));
  }
  // Log-magnitude form avoids overflow in alpha^j and j! for large |alpha|.
  const double phase = std::arg(alpha);
  const double x = r * r;
  for (std::size_t j = 0; j < dim; ++j) {
    double jd = static_cast<double>(j);
    double log_mag = 0.5 * log_poisson(x, j);
    c[idx(j)] = std::polar(std::exp(log_mag), phase * jd);
  }
  return FockVector::normalized(std::move(c));
}

// Operators

FockVector apply_lower(const FockVector& psi, std::size_t steps) {
  const std::size_t n = psi.dim();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(idx(n));
  for (std::size_t j = 0; j + steps < n; ++j) out[idx(j)] = psi[j + steps];
  return FockVector::raw(std::move(out));
}

FockVector apply_raise(const FockVector& psi, std::size_t steps, const Tolerances& tol) {
  const std::size_t n = psi.dim();
  double lost = top_mass(psi, steps);
  if (lost > tol.tail_tol) {
    throw TruncationTooSmall("raising pushes mass " + std::to_string(lost) + " out of the truncated space", n,
                             n + steps);
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(idx(n));
  for (std::size_t j = 0; j + steps < n; ++j) out[idx(j + steps)] = psi[j];
  return FockVector::raw(std::move(out));
}

FockVector apply_parity(const FockVector& psi) {
  Eigen::VectorXcd out = psi.amplitudes();
  for (Index j = 1; j < out.size(); j += 2) out[j] = -out[j];
  return FockVector::raw(std::move(out));
}

FockVector apply_annihilation(const FockVector& psi) {
  const std::size_t n = psi.dim();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(idx(n));
  for (std::size_t j = 0; j + 1 < n; ++j) out[idx(j)] = std::sqrt(static_cast<double>(j + 1)) * psi[j + 1];
  return FockVector::raw(std::move(out));
}

FockVector apply_number(const FockVector& psi) {
  Eigen::VectorXcd out = psi.amplitudes();
  for (Index j = 0; j < out.size(); ++j) out[j] *= static_cast<double>(j);
  return FockVector::raw(std::move(out));
}

DensityMatrix apply_lower(const DensityMatrix& rho, std::size_t steps) {
  const std::size_t n = rho.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(idx(n), idx(n));
  if (steps < n) {
    Index keep = idx(n - steps);
    out.topLeftCorner(keep, keep) = rho.elements().bottomRightCorner(keep, keep);
  }
  return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix apply_raise(const DensityMatrix& rho, std::size_t steps, const Tolerances& tol) {
  const std::size_t n = rho.dim();
  double lost = top_mass(rho, steps);
  if (lost > tol.tail_tol) {
    throw TruncationTooSmall("raising pushes mass " + std::to_string(lost) + " out of the truncated space", n,
                             n + steps);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(idx(n), idx(n));
  if (steps < n) {
    Index keep = idx(n - steps);
    out.bottomRightCorner(keep, keep) = rho.elements().topLeftCorner(keep, keep);
  }
  return DensityMatrix::from_matrix(std::move(out));
}

double top_mass(const FockVector& psi, std::size_t count) {
  count = std::min(count, psi.dim());
  return psi.amplitudes().tail(idx(count)).squaredNorm();
}

double top_mass(const DensityMatrix& rho, std::size_t count) {
  count = std::min(count, rho.dim());
  return rho.elements().diagonal().tail(idx(count)).real().sum();
}

Complex overlap(const FockVector& a, const FockVector& b) {
  require_same_dim(a.dim(), b.dim());
  return a.amplitudes().dot(b.amplitudes());
}

std::vector<double> fock_distribution(const FockVector& psi) {
  std::vector<double> p(psi.dim());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(psi[j]);
  return p;
}

std::vector<double> fock_distribution(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = rho(j, j).real();
  return p;
}

namespace {

double weighted_sum(const std::vector<double>& p, int power) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    double jd = static_cast<double>(j);
    s += (power == 1 ? jd : jd * jd) * p[j];
  }
  return s;
}

}  // namespace

double mean_photon(const FockVector& psi) { return weighted_sum(fock_distribution(psi), 1); }
double mean_photon(const DensityMatrix& rho) { return weighted_sum(fock_distribution(rho), 1); }
double photon_moment2(const FockVector& psi) { return weighted_sum(fock_distribution(psi), 2); }
double photon_moment2(const DensityMatrix& rho) { return weighted_sum(fock_distribution(rho), 2); }

double fidelity(const DensityMatrix& rho, const FockVector& target) {
  require_same_dim(rho.dim(), target.dim());
  const auto& t = target.amplitudes();
  Complex f = t.dot(rho.elements() * t);
  return std::clamp(f.real(), 0.0, 1.0);
}

}  // namespace tpjc
