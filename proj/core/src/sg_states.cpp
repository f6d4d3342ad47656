#include "tpjc/sg_states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tpjc/errors.hpp"

namespace tpjc {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_non_negative(int m) {
  if (m < 0) throw InvalidArgument("photon step count m must be non-negative, got " + std::to_string(m));
}

double q_from_distribution(const std::vector<double>& p) {
  double mean = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) mean += static_cast<double>(j) * p[j];
  if (mean == 0.0) throw ZeroMeanPhoton();
  // Central second moment; same value as <n^2> - <n>^2 with less cancellation.
  double var = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    double d = static_cast<double>(j) - mean;
    var += d * d * p[j];
  }
  return var / mean - 1.0;
}

}  // namespace

std::string_view to_string(Mode mode) noexcept { return mode == Mode::Add ? "add" : "subtract"; }

Mode parse_mode(std::string_view text) {
  if (text == "add") return Mode::Add;
  if (text == "subtract") return Mode::Subtract;
  throw InvalidArgument("mode must be \"add\" or \"subtract\", got \"" + std::string(text) + "\"");
}

FockVector add_photons_ideal(const FockVector& psi, int m, const Tolerances& tol) {
  require_non_negative(m);
  const auto gain = static_cast<std::size_t>(2 * m);
  double lost = top_mass(psi, gain);
  if (lost > tol.tail_tol) {
    throw TruncationTooSmall("adding " + std::to_string(gain) + " photons pushes mass " + std::to_string(lost) +
                                 " out of the truncated space",
                             psi.dim(), psi.dim() + gain);
  }
  // Each step's pushed-out levels are a subset of the top 2m checked above.
  Tolerances unchecked = tol;
  unchecked.tail_tol = std::numeric_limits<double>::infinity();
  FockVector out = psi;
  for (int step = 0; step < m; ++step) out = apply_raise(apply_parity(out), 2, unchecked) * kI;
  return out;
}

SubtractedState subtract_photons_ideal(const FockVector& psi, int m, const Tolerances& tol) {
  require_non_negative(m);
  const double low = low_component_mass(psi, m);
  if (low >= 1.0 - tol.norm_tol) {
    throw AllMassRemoved("subtracting " + std::to_string(2 * m) + " photons removes mass " + std::to_string(low));
  }
  FockVector out = psi;
  for (int step = 0; step < m; ++step) out = apply_lower(apply_parity(out), 2) * kI;
  bool renorm = low > tol.low_mass_tol;
  if (renorm) out = out * Complex(1.0 / std::sqrt(1.0 - low));
  return {std::move(out), low, renorm};
}

FockVector ideal_state(const SgStateSpec& spec, const Tolerances& tol) {
  if (spec.mode == Mode::Add) return add_photons_ideal(spec.base, spec.m, tol);
  return subtract_photons_ideal(spec.base, spec.m, tol).state;
}

double low_component_mass(const FockVector& psi, int m) {
  require_non_negative(m);
  std::size_t count = std::min(static_cast<std::size_t>(2 * m), psi.dim());
  return psi.amplitudes().head(static_cast<Eigen::Index>(count)).squaredNorm();
}

double subtracted_mean_closed_form(const FockVector& psi, int m) {
  double low = low_component_mass(psi, m);
  return (mean_photon(psi) - 2.0 * m + low) / (1.0 - low);
}

double subtracted_mean_exact(const FockVector& psi, int m) {
  double low = low_component_mass(psi, m);
  double low_weighted = 0.0;
  std::size_t count = std::min(static_cast<std::size_t>(2 * m), psi.dim());
  for (std::size_t k = 0; k < count; ++k) low_weighted += static_cast<double>(k) * std::norm(psi[k]);
  return (mean_photon(psi) - 2.0 * m * (1.0 - low) - low_weighted) / (1.0 - low);
}

NonlinearImage apply_nonlinear_annihilation(const FockVector& state, int m, Mode mode) {
  require_non_negative(m);
  FockVector lowered = apply_annihilation(state);
  Eigen::VectorXcd out = lowered.amplitudes();
  const double shift = (mode == Mode::Add ? -2.0 : 2.0) * m;
  std::size_t zeroed = 0;
  for (Eigen::Index n = 0; n < out.size(); ++n) {
    double nd = static_cast<double>(n);
    double arg = (nd + shift + 1.0) / (nd + 1.0);
    if (arg < 0.0) {
      if (out[n] != Complex(0.0)) ++zeroed;
      out[n] = 0.0;
    } else {
      out[n] *= std::sqrt(arg);
    }
  }
  return {FockVector::raw(std::move(out)), zeroed};
}

int eigenvalue_sign(int m) noexcept { return (m % 2 == 0) ? 1 : -1; }

EigenResidual eigen_residual(Complex alpha, int m, Mode mode, std::size_t dim, const Tolerances& tol) {
  require_non_negative(m);
  FockVector coherent = make_coherent(alpha, dim, tol);
  FockVector ideal = [&] {
    if (mode == Mode::Add) return add_photons_ideal(coherent, m, tol);
    double low = low_component_mass(coherent, m);
    if (low > tol.low_mass_tol) {
      throw InvalidArgument("coherent amplitude too small for subtraction: low-component mass " +
                            std::to_string(low) + " exceeds low_mass_tol");
    }
    return subtract_photons_ideal(coherent, m, tol).state;
  }();
  NonlinearImage img = apply_nonlinear_annihilation(ideal, m, mode);
  EigenResidual r;
  r.m = m;
  r.zeroed_components = img.zeroed_components;
  r.minus_alpha = (img.image.amplitudes() + alpha * ideal.amplitudes()).norm();
  r.plus_alpha = (img.image.amplitudes() - alpha * ideal.amplitudes()).norm();
  return r;
}

double mandel_q(const FockVector& psi) { return q_from_distribution(fock_distribution(psi)); }
double mandel_q(const DensityMatrix& rho) { return q_from_distribution(fock_distribution(rho)); }

double mandel_q_shift_predict(double q_base, double n_base, int m, Mode mode) {
  require_non_negative(m);
  const double s = (mode == Mode::Add ? 2.0 : -2.0) * m;
  const double denom = n_base + s;
  if (denom == 0.0) throw ZeroMeanPhoton();
  return n_base / denom * q_base - s / denom;
}

double mandel_q_coherent_predict(Complex alpha, int m, Mode mode) {
  return mandel_q_shift_predict(0.0, std::norm(alpha), m, mode);
}

}  // namespace tpjc
