#pragma once

#include <stdexcept>
#include <string>

namespace torusdet {

/// Input outside the mathematical domain of an operation (τ₂ ≤ 0, V₀ ≤ 0,
/// a Gamma pole, a non-finite integrand sample, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at the simple pole s = 1 of the continued zeta function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quadrature or series ran out of its evaluation budget before reaching
/// the requested tolerance. Carries the best estimate seen so far.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double best_estimate,
                 double error_estimate)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace torusdet
