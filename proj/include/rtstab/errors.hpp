#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (extents, resolutions, keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A standing hypothesis of the stability theory does not hold
/// (positive initial data, positive source factor, observation time).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Observation horizon too short for the finite propagation speed.
class ObservationTimeError : public HypothesisViolation {
 public:
  using HypothesisViolation::HypothesisViolation;
};

/// Time step violates the monotonicity bound of the explicit scheme.
class StabilityError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  [[nodiscard]] std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Boundary data missing for part of the inflow boundary.
class IncompleteDataError : public Error {
 public:
  using Error::Error;
};

/// Not enough samples (time steps, reports) for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Phase kernel row with vanishing quadrature sum.
class DegenerateKernelError : public Error {
 public:
  using Error::Error;
};

/// Input field does not satisfy the precondition of an estimate.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace rtstab
