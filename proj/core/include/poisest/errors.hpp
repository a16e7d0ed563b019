#pragma once

#include <stdexcept>
#include <string>

namespace poisest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Moment constraints cannot be met by any non-negative rate triple.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A denominator in an estimator or coefficient formula is zero.
class SingularDenominatorError : public Error {
 public:
  using Error::Error;
};

/// Second-order sample statistics were requested from a single observation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// The t_m quadratic form is not positive definite (AB - C^2 <= 0).
class DegenerateFormError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo run produced no usable replicates.
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace poisest
