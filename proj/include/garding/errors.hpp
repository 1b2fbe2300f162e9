#pragma once

#include <stdexcept>
#include <string>

namespace garding {

/// Input outside the mathematical domain of an operation (k out of range,
/// negative coefficient where a certificate needs non-negative ones, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A hypothesis of a theorem the operation relies on does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Top coefficient a_p vanishes for an operation that divides by it.
class DegenerateDegreeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A conformal factor or step lost strict positivity.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative method did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Exact evaluation would exceed the configured work budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace garding
