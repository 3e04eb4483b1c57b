#include "torusdet/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "torusdet/errors.hpp"

namespace torusdet::numerics {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct Node {
  double t;
  double weight;
};

// Maps u ∈ ℝ onto one piece of the integration range together with dt/du.
struct Mapping {
  double u_min;
  double u_max;
  Node (*node)(double u, double a, double b);
  double a;
  double b;
};

// tanh-sinh onto (a, b). Both t - a and b - t are formed without
// cancellation so nodes can sit within ~1e-275 of an endpoint.
Node tanh_sinh_node(double u, double a, double b) {
  const double y = kHalfPi * std::sinh(u);
  const double e = std::exp(-2.0 * y);
  const double x = 1.0 / (1.0 + e);
  const double one_minus_x = e / (1.0 + e);
  const double width = b - a;
  const double t = x < 0.5 ? a + width * x : b - width * one_minus_x;
  const double w = std::numbers::pi * std::cosh(u) * x * one_minus_x * width;
  return {t, w};
}

// exp-sinh onto (a, ∞).
Node exp_sinh_node(double u, double a, double /*unused*/) {
  const double y = kHalfPi * std::sinh(u);
  const double e = std::exp(y);
  return {a + e, kHalfPi * std::cosh(u) * e};
}

// sinh(6) ≈ 201.7 puts the outermost tanh-sinh nodes ~1e-275 from the ends.
constexpr double kTanhSinhRange = 6.0;
// exp-sinh nodes reach t - a ≈ 1e15.
constexpr double kExpSinhRange = 3.78;
constexpr double kInitialStep = 0.5;
constexpr int kMinLevels = 3;

template <class T>
class LevelIntegrator {
 public:
  LevelIntegrator(const std::function<T(double)>& f, const Mapping& map)
      : f_(f), map_(map) {}

  // Sums h Σ w f over nodes u = k h; `odd_only` restricts to odd k.
  T sample(double h, bool odd_only, std::size_t& evaluations) {
    const auto k_min = static_cast<long>(std::ceil(map_.u_min / h));
    const auto k_max = static_cast<long>(std::floor(map_.u_max / h));
    CompensatedSum<T> acc;
    for (long k = k_min; k <= k_max; ++k) {
      if (odd_only && (k % 2 == 0)) continue;
      const Node node = map_.node(static_cast<double>(k) * h, map_.a, map_.b);
      if (node.weight == 0.0) continue;
      const T value = f_(node.t);
      ++evaluations;
      if (!std::isfinite(std::abs(value))) {
        std::ostringstream msg;
        msg << "non-finite integrand sample at t = " << node.t;
        throw DomainError(msg.str());
      }
      acc.add(node.weight * value);
    }
    return h * acc.value();
  }

  std::size_t count(double h, bool odd_only) const {
    const auto k_min = static_cast<long>(std::ceil(map_.u_min / h));
    const auto k_max = static_cast<long>(std::floor(map_.u_max / h));
    const auto all = static_cast<std::size_t>(k_max - k_min + 1);
    return odd_only ? all / 2 + 1 : all;
  }

 private:
  const std::function<T(double)>& f_;
  Mapping map_;
};

struct PartState {
  double h = kInitialStep;
  int level = 0;
  bool converged = false;
  double diff = 0.0;
};

template <class T>
BasicQuadResult<T> integrate_parts(const std::function<T(double)>& f,
                                   const std::vector<Mapping>& maps,
                                   const QuadOptions& opts) {
  if (!(opts.tol_abs > 0.0)) {
    throw DomainError("quadrature tolerance must be positive");
  }
  const double part_tol = opts.tol_abs / static_cast<double>(maps.size());

  std::vector<LevelIntegrator<T>> parts;
  parts.reserve(maps.size());
  for (const auto& m : maps) parts.emplace_back(f, m);

  std::vector<PartState> state(maps.size());
  std::vector<T> estimate(maps.size());
  std::size_t evaluations = 0;

  for (std::size_t i = 0; i < parts.size(); ++i) {
    estimate[i] = parts[i].sample(state[i].h, false, evaluations);
    state[i].diff = std::abs(estimate[i]) + 1.0;
  }

  auto best = [&] {
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      total += estimate[i];
      err += state[i].diff;
    }
    return std::pair{total, err};
  };

  for (;;) {
    bool all_done = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto& st = state[i];
      if (st.converged) continue;
      all_done = false;
      const double h = st.h / 2.0;
      if (evaluations + parts[i].count(h, true) > opts.max_evaluations) {
        const auto [value, err] = best();
        std::ostringstream msg;
        msg << "quadrature budget of " << opts.max_evaluations
            << " samples exhausted (error estimate " << err << ", target "
            << opts.tol_abs << ")";
        throw BudgetExceeded(msg.str(), std::real(value), err);
      }
      const T refined = estimate[i] / 2.0 + parts[i].sample(h, true, evaluations);
      st.diff = std::abs(refined - estimate[i]);
      estimate[i] = refined;
      st.h = h;
      ++st.level;
      if (st.level >= kMinLevels && st.diff <= part_tol) st.converged = true;
    }
    if (all_done) break;
  }

  const auto [value, err] = best();
  return {value, err, evaluations};
}

std::vector<Mapping> halfline_maps() {
  return {
      Mapping{-kTanhSinhRange, kTanhSinhRange, &tanh_sinh_node, 0.0, 1.0},
      Mapping{-kExpSinhRange, kExpSinhRange, &exp_sinh_node, 1.0, 0.0},
  };
}

std::vector<Mapping> interval_maps(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("integration interval must be finite with a < b");
  }
  return {Mapping{-kTanhSinhRange, kTanhSinhRange, &tanh_sinh_node, a, b}};
}

}  // namespace

QuadResult integrate_halfline(const std::function<double(double)>& f,
                              const QuadOptions& opts) {
  return integrate_parts<double>(f, halfline_maps(), opts);
}

ComplexQuadResult integrate_halfline_complex(
    const std::function<std::complex<double>(double)>& f,
    const QuadOptions& opts) {
  return integrate_parts<std::complex<double>>(f, halfline_maps(), opts);
}

QuadResult integrate_interval(const std::function<double(double)>& f, double a,
                              double b, const QuadOptions& opts) {
  return integrate_parts<double>(f, interval_maps(a, b), opts);
}

ComplexQuadResult integrate_interval_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const QuadOptions& opts) {
  return integrate_parts<std::complex<double>>(f, interval_maps(a, b), opts);
}

SeriesResult sum_tail_bounded(const std::function<double(std::size_t)>& term,
                              const std::function<double(std::size_t)>& tail_bound,
                              const SeriesOptions& opts) {
  if (!(opts.tol_abs > 0.0)) {
    throw DomainError("series tolerance must be positive");
  }
  const std::size_t chunk = opts.chunk == 0 ? 1 : opts.chunk;
  std::vector<double> block;
  block.reserve(chunk);

  CompensatedSum<double> acc;
  std::size_t n = 0;
  double bound = 0.0;
  while (n < opts.max_terms) {
    block.clear();
    const std::size_t end = std::min(n + chunk, opts.max_terms);
    for (std::size_t k = n + 1; k <= end; ++k) block.push_back(term(k));

    for (double t : block) {
      if (!std::isfinite(t)) {
        throw DomainError("non-finite series term at index " +
                          std::to_string(n + 1));
      }
      acc.add(t);
      ++n;
      bound = tail_bound(n);
      if (!(bound >= 0.0)) {
        throw DomainError("tail bound must be non-negative at index " +
                          std::to_string(n));
      }
      if (bound <= opts.tol_abs) return {acc.value(), n, bound};
    }
  }
  std::ostringstream msg;
  msg << "series budget of " << opts.max_terms
      << " terms exhausted (tail bound " << bound << ", target " << opts.tol_abs
      << ")";
  throw BudgetExceeded(msg.str(), acc.value(), bound);
}

}  // namespace torusdet::numerics
