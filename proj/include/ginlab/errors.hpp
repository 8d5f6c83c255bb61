#pragma once

#include <stdexcept>
#include <string>

namespace ginlab {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The deterministic-equivalent fixed-point equation has no positive solution
// at the requested point: the point lies outside the spectral bulk.
class OutsideBulkError : public Error {
 public:
  OutsideBulkError(const std::string& what, double criterion_value)
      : Error(what), criterion_value_(criterion_value) {}
  // Value of the bulk criterion (mean inverse squared singular value);
  // the bulk requires this to exceed 1.
  double criterion_value() const noexcept { return criterion_value_; }

 private:
  double criterion_value_;
};

// Input lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A dense linear-algebra backend routine failed (non-convergence/bad input).
class LinAlgError : public Error {
 public:
  using Error::Error;
};

// Malformed command line or configuration file.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Throws Error if x is NaN or infinite. Core computations must stay finite;
// a non-finite intermediate is always a bug, never data.
void ensure_finite(double x, const char* context);

}  // namespace ginlab
