#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

/// Caller broke a documented precondition (shape, range, Hermitian-ness, ...).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative kernel did not converge or produced non-finite output.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// A shifted operator is numerically singular beyond the documented condition cap.
class SingularityError : public NumericalFailure {
 public:
  explicit SingularityError(const std::string& what) : NumericalFailure(what) {}
};

}  // namespace tracelab
