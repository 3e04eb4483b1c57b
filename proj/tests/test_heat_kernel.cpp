#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "random_specs.hpp"
#include "torusdet/errors.hpp"
#include "torusdet/heat_kernel.hpp"

using namespace torusdet;

namespace {

constexpr double kPi = std::numbers::pi;

double weyl(const OperatorSpec& spec, double t) {
  return std::exp(-spec.v0() * t) / (4.0 * kPi * t);
}

// Smallest τ₂·wᵗ(Ω′)⁻¹w over w ≠ 0, by enumeration.
double dual_gap(const OperatorSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b) {
      if (a == 0 && b == 0) continue;
      const double x = b + spec.tau1() * a;
      best = std::min(best, (x * x + spec.tau2() * spec.tau2() * a * a) / spec.tau2());
    }
  return best;
}

}  // namespace

TEST_CASE("heat_trace: large t is dominated by the zero mode") {
  const auto sq = make_operator(0.0, 1.0, 1.0);
  const auto th = heat_trace(sq, 10.0);
  // mpmath reference
  CHECK(std::fabs(th.value - 4.539992976248485e-05) <= 1e-18);
  CHECK(std::fabs(th.value - testing::heat_trace_brute(sq, 10.0, 3)) <= 1e-18);
  CHECK(th.tail_bound >= 0.0);
  CHECK(th.truncation_N >= 1);
}

TEST_CASE("heat_trace: finite and positive, strictly decreasing") {
  for (const auto& spec : testing::random_specs(6, 11)) {
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 1e-3; t < 40.0; t *= 1.5) {
      const double v = heat_trace(spec, t).value;
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("heat_trace: direct and dual lattice sums agree") {
  const auto sq = make_operator(0.0, 1.0, 1.0);
  const double ref = 0.7789619196371443;  // mpmath, t = 0.25
  CHECK(std::fabs(heat_trace_direct(sq, 0.25).value - ref) <= 1e-14);
  CHECK(std::fabs(heat_trace_dual(sq, 0.25).value - ref) <= 1e-14);

  for (const auto& spec : testing::random_specs(10, 5)) {
    for (double t : {0.02, 0.07, 0.25, 1.0, 3.0}) {
      const double direct = heat_trace_direct(spec, t).value;
      const double dual = heat_trace_dual(spec, t).value;
      CAPTURE(t);
      CHECK(std::fabs(direct - dual) <= 1e-10 * direct);
    }
    // Independent brute-force square sums with explicit (Ω′)⁻¹.
    CHECK(std::fabs(heat_trace(spec, 0.5).value - testing::heat_trace_brute(spec, 0.5, 12)) <= 1e-13);
    CHECK(std::fabs(heat_trace(spec, 0.05).value - testing::heat_trace_dual_brute(spec, 0.05, 12)) <= 1e-12);
  }
}

TEST_CASE("heat_trace: invariant under τ₁ → -τ₁") {
  for (double c : {0.1, 0.35, 0.8}) {
    const auto plus = make_operator(c, 0.9, 1.5);
    const auto minus = make_operator(-c, 0.9, 1.5);
    for (double t : {0.01, 0.1, 1.0}) {
      CHECK(std::fabs(heat_trace(plus, t).value - heat_trace(minus, t).value) <=
            1e-14 * heat_trace(plus, t).value);
    }
  }
}

TEST_CASE("heat_trace: error paths") {
  const auto sq = make_operator(0.0, 1.0, 1.0);
  CHECK_THROWS_AS(heat_trace(sq, 0.0), DomainError);
  CHECK_THROWS_AS(heat_trace(sq, -1.0), DomainError);
  CHECK_THROWS_AS(heat_remainder(sq, 0.0), DomainError);
  CHECK_THROWS_AS(detail::gaussian_lattice_sum(1e-9, 1e-9, 0.0, false, 1e-16, 1000),
                  BudgetExceeded);
}

TEST_CASE("poisson_lhs_rhs: identity values") {
  const auto self_dual = poisson_lhs_rhs(1.0, 0.0, 10);
  CHECK(std::fabs(self_dual.lhs - 1.0864348112133080) <= 1e-15);
  CHECK(std::fabs(self_dual.rhs - 1.0864348112133080) <= 1e-15);

  const auto shifted = poisson_lhs_rhs(4.0, 0.5, 20);
  CHECK(std::fabs(shifted.lhs - shifted.rhs) <= 1e-12);

  for (double t : {0.3, 2.0}) {
    const auto a = poisson_lhs_rhs(t, 0.0, 30);
    const auto b = poisson_lhs_rhs(t, 2.0, 30);
    CHECK(std::fabs(a.lhs - b.lhs) <= 1e-14);
    CHECK(std::fabs(a.rhs - b.rhs) <= 1e-14);
  }
  CHECK_THROWS_AS(poisson_lhs_rhs(0.0, 0.0, 5), DomainError);
}

TEST_CASE("poisson_lhs_rhs: t × v grid") {
  for (double t : {0.2, 1.0, 5.0}) {
    for (double v : {0.0, 0.25, 0.5, 0.9}) {
      const auto p = poisson_lhs_rhs(t, v, 40);
      CAPTURE(t);
      CAPTURE(v);
      CHECK(std::fabs(p.lhs - p.rhs) <= 1e-11);
    }
  }
}

TEST_CASE("heat_remainder: reference values and definition") {
  const auto sq = make_operator(0.0, 1.0, 1.0);
  CHECK(std::fabs(heat_remainder(sq, 10.0) - 4.5038648600598635e-05) <= 1e-18);
  CHECK(heat_remainder(sq, 10.0) ==
        doctest::Approx(std::exp(-10.0) * (1.0 - 1.0 / (40.0 * kPi))).epsilon(1e-12));
  const double small = heat_remainder(sq, 0.01);
  CHECK(std::fabs(small) <= 1e-8);
  CHECK(small == doctest::Approx(4.376683431286032e-10).epsilon(1e-10));

  for (const auto& spec : testing::random_specs(5, 9)) {
    for (double t : {0.005, 0.05, 0.5, 5.0}) {
      const double theta = heat_trace(spec, t).value;
      CHECK(std::fabs(heat_remainder(spec, t) + weyl(spec, t) - theta) <= 1e-14 * theta);
    }
  }
}

TEST_CASE("heat_remainder: exponentially small at both ends") {
  for (const auto& spec : testing::random_specs(5, 21)) {
    const double gap = dual_gap(spec);
    for (double t : {0.002, 0.005, 0.01, 0.02}) {
      const double r = heat_remainder(spec, t);
      CHECK(r >= 0.0);
      CHECK(r <= 5.0 * std::exp(-gap / (4.0 * t)) * weyl(spec, t));
    }
    for (double t : {5.0, 10.0, 20.0}) {
      CHECK(std::fabs(heat_remainder(spec, t)) <= 1.01 * std::exp(-spec.v0() * t));
    }
  }
}
