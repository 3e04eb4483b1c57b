#pragma once

#include <cstddef>

namespace torusdet {

/// Tolerances and budgets shared by every evaluation route.
struct EvalOptions {
  /// Absolute tolerance for quadratures and series.
  double tol = 1e-10;
  /// Integrand samples allowed per quadrature.
  std::size_t max_evaluations = 1'000'000;
  /// Terms allowed per series (and lattice points per truncated sum).
  std::size_t max_terms = 1'000'000;
};

}  // namespace torusdet
