#pragma once

// Ideal 2m-photon added and subtracted states built from the
// Susskind-Glogower operators, their photon statistics, and the nonlinear
// annihilation operators they diagonalize.
//
//   added:       [ i V^dag^2 (-1)^n ]^m |psi>
//   subtracted:  (1 - L)^{-1/2} [ i V^2 (-1)^n ]^m |psi>,   L = sum_{k<2m} |c_k|^2
//
// The i and (-1)^n factors are kept exactly, so these are phase-exact
// states and not just distributions.

#include <cstddef>
#include <string_view>

#include "tpjc/fock.hpp"
#include "tpjc/tolerances.hpp"

namespace tpjc {

enum class Mode { Add, Subtract };

std::string_view to_string(Mode mode) noexcept;
/// Accepts "add" or "subtract"; throws InvalidArgument otherwise.
Mode parse_mode(std::string_view text);

struct SgStateSpec {
  FockVector base;
  int m = 0;
  Mode mode = Mode::Add;
};

FockVector add_photons_ideal(const FockVector& psi, int m, const Tolerances& tol = {});

struct SubtractedState {
  FockVector state;
  double low_mass = 0.0;
  // True when low_mass exceeded low_mass_tol and the result was renormalized.
  bool renormalized = false;
};

/// Throws AllMassRemoved if the low components carry (almost) all of the mass.
SubtractedState subtract_photons_ideal(const FockVector& psi, int m, const Tolerances& tol = {});

/// Dispatches to the add or subtract constructor.
FockVector ideal_state(const SgStateSpec& spec, const Tolerances& tol = {});

/// sum_{k=0}^{min(2m, N)-1} |c_k|^2
double low_component_mass(const FockVector& psi, int m);

/// Mean photon number of the subtracted state from the closed-form bracket
/// (1 - L)^{-1} [ <n> - 2m + L ]. This agrees with the true mean only when
/// L ~ 0; the exact mean is (1 - L)^{-1} [ <n> - 2m(1 - L) - sum_{k<2m} k|c_k|^2 ].
double subtracted_mean_closed_form(const FockVector& psi, int m);
double subtracted_mean_exact(const FockVector& psi, int m);

struct NonlinearImage {
  FockVector image;
  // Components whose square-root argument was negative while carrying nonzero
  // amplitude; they are set to zero.
  std::size_t zeroed_components = 0;
};

/// A_{+2m} = sqrt((n - 2m + 1)/(n + 1)) a   (Add)
/// A_{-2m} = sqrt((n + 2m + 1)/(n + 1)) a   (Subtract)
/// The n-dependent factor acts to the left of a. Result is unnormalized.
NonlinearImage apply_nonlinear_annihilation(const FockVector& state, int m, Mode mode);

/// ||A |alpha_{+-2m}> - lambda |alpha_{+-2m}>|| for lambda = -alpha and +alpha.
///
/// Numerically the eigenvalue is (-1)^m alpha: the printed -alpha holds for
/// odd m and +alpha for even m, which comes from the i^m (-1)^{m j} phase the
/// construction puts on |j + 2m>. `matching_residual()` picks that one.
struct EigenResidual {
  double minus_alpha = 0.0;
  double plus_alpha = 0.0;
  int m = 0;
  std::size_t zeroed_components = 0;

  double matching_residual() const noexcept { return (m % 2 == 0) ? plus_alpha : minus_alpha; }
};

/// For Subtract, throws InvalidArgument unless the low-component mass of
/// |alpha> is at most tol.low_mass_tol.
EigenResidual eigen_residual(Complex alpha, int m, Mode mode, std::size_t dim, const Tolerances& tol = {});

/// Sign s of the verified eigenvalue s*alpha.
int eigenvalue_sign(int m) noexcept;

/// (<n^2> - <n>^2) / <n> - 1. Throws ZeroMeanPhoton when <n> = 0.
double mandel_q(const FockVector& psi);
double mandel_q(const DensityMatrix& rho);

/// Q after a shape-preserving shift by +-2m photons:
///   n/(n +- 2m) Q -+ 2m/(n +- 2m)
double mandel_q_shift_predict(double q_base, double n_base, int m, Mode mode);

/// Shift prediction for a coherent base (Q = 0): -+ 2m / (|alpha|^2 +- 2m).
double mandel_q_coherent_predict(Complex alpha, int m, Mode mode);

}  // namespace tpjc
