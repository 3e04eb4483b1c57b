#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace torusdet::numerics {

template <class T>
struct BasicQuadResult {
  T value{};
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

using QuadResult = BasicQuadResult<double>;
using ComplexQuadResult = BasicQuadResult<std::complex<double>>;

struct QuadOptions {
  double tol_abs = 1e-10;
  std::size_t max_evaluations = 1'000'000;
};

/// Integrates f over (0, ∞).
///
/// The half-line is split at t = 1. On (0, 1] a tanh-sinh map clusters nodes
/// double-exponentially towards the origin, which absorbs integrable power
/// singularities t^a (a > -1) and essential zeros like e^{-β/t}. On [1, ∞) an
/// exp-sinh map t = 1 + exp(π/2 sinh u) handles exponential decay. Each part
/// is refined by step halving until successive estimates differ by at most
/// half the tolerance.
///
/// Throws DomainError if f returns a non-finite value and BudgetExceeded
/// (carrying the best estimate) if the sample budget runs out.
QuadResult integrate_halfline(const std::function<double(double)>& f,
                              const QuadOptions& opts = {});
ComplexQuadResult integrate_halfline_complex(
    const std::function<std::complex<double>(double)>& f,
    const QuadOptions& opts = {});

/// Tanh-sinh quadrature on a finite interval [a, b].
QuadResult integrate_interval(const std::function<double(double)>& f, double a,
                              double b, const QuadOptions& opts = {});
ComplexQuadResult integrate_interval_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadOptions& opts = {});

struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
};

struct SeriesOptions {
  double tol_abs = 1e-10;
  std::size_t max_terms = 1'000'000;
  /// Terms are evaluated in blocks of this size before the stopping index is
  /// located. The result does not depend on it.
  std::size_t chunk = 64;
};

/// Sums term(1) + term(2) + ... and stops at the first N with
/// tail_bound(N) ≤ tol_abs, where tail_bound(N) must bound |Σ_{k>N} term(k)|.
/// At least one term is always taken.
SeriesResult sum_tail_bounded(const std::function<double(std::size_t)>& term,
                              const std::function<double(std::size_t)>& tail_bound,
                              const SeriesOptions& opts = {});

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

}  // namespace torusdet::numerics
