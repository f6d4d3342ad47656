#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpjc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The truncated Fock space cannot hold the state without losing more than
/// the tail tolerance. Carries the offending dimension and a suggested minimum.
class TruncationTooSmall : public Error {
 public:
  TruncationTooSmall(const std::string& what, std::size_t dim, std::size_t suggested_minimum)
      : Error(what + " (dim=" + std::to_string(dim) +
              ", suggested minimum dim=" + std::to_string(suggested_minimum) + ")"),
        dim_(dim),
        suggested_minimum_(suggested_minimum) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t suggested_minimum() const noexcept { return suggested_minimum_; }

 private:
  std::size_t dim_;
  std::size_t suggested_minimum_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : Error("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

/// Photon subtraction would remove the entire state.
class AllMassRemoved : public Error {
 public:
  using Error::Error;
};

class ZeroMeanPhoton : public Error {
 public:
  ZeroMeanPhoton() : Error("mean photon number is zero") {}
};

class DiagonalizationFailure : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace tpjc
