#pragma once

#include <stdexcept>
#include <string>

namespace bbmsel {

/// Argument outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature or series evaluation missed its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Population or work cap exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken pathwise ordering in a coupled run.
class CouplingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bbmsel
