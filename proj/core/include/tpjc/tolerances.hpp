#pragma once

namespace tpjc {

/// Numerical tolerances shared by every module. All masses (tail, low
/// component) are probabilities, i.e. sums of squared amplitudes.
struct Tolerances {
  double norm_tol = 1e-10;
  double herm_tol = 1e-10;
  double psd_tol = 1e-8;
  double tail_tol = 1e-10;
  // Below this low-Fock mass the subtracted state is built without
  // renormalization.
  double low_mass_tol = 1e-12;

  /// Throws InvalidArgument unless every field is finite and non-negative.
  void validate() const;

  bool operator==(const Tolerances&) const = default;
};

}  // namespace tpjc
