#pragma once

#include <stdexcept>
#include <string>

namespace qleak {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong shape, non-Hermitian matrix, invalid probability
// vector, out-of-range parameter.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Argument outside the mathematical domain of an operation (e.g. a
// fractional power of an operator that is not positive semi-definite).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Requested mode is defined but not supported (e.g. (eps, delta>0) checks).
class UnsupportedMode : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numerical routine failed to converge within its iteration budget.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Two quantities that are provably ordered came out in the wrong order by
// more than the certified numerical slack. Indicates a solver bug.
class ChainViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qleak
