#pragma once

#include <stdexcept>
#include <string>

namespace hmaps {

// Bad input: unknown names, out-of-range parameters, degenerate frames.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-posed computation that could not be carried out: evaluation at a
// coordinate singularity, drift budget exceeded, CFL violation, NaN.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside the chart (domain exit or singular point).
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hmaps
