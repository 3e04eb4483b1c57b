#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "random_specs.hpp"
#include "torusdet/errors.hpp"
#include "torusdet/torus_spectrum.hpp"

using namespace torusdet;

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

std::vector<double> square_spectrum(const OperatorSpec& spec, int N) {
  std::vector<double> out;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) out.push_back(eigenvalue(spec, {m, n}));
  std::sort(out.begin(), out.end());
  return out;
}

void check_same_multiset(std::vector<double> a, std::vector<double> b, double tol) {
  REQUIRE(a.size() == b.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::fabs(a[i] - b[i]) <= tol * std::max(1.0, std::fabs(a[i])));
  }
}

}  // namespace

TEST_CASE("make_operator: validation") {
  const auto sq = make_operator(0.0, 1.0, 1.0);
  CHECK(sq.tau1() == 0.0);
  CHECK(sq.tau2() == 1.0);
  CHECK(sq.v0() == 1.0);
  CHECK_NOTHROW(make_operator(0.5, 2.0, 0.1));
  CHECK_THROWS_WITH_AS(make_operator(0.0, -1.0, 1.0),
                       "modulus must have positive imaginary part", DomainError);
  CHECK_THROWS_AS(make_operator(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_WITH_AS(make_operator(0.5, 1.0, 0.0), "offset must be positive", DomainError);
  CHECK_THROWS_AS(make_operator(0.5, 1.0, -2.0), DomainError);
  CHECK_THROWS_AS(make_operator(std::nan(""), 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_operator(0.0, HUGE_VAL, 1.0), DomainError);
}

TEST_CASE("eigenvalue: direct substitution") {
  const auto sq = make_operator(0.0, 1.0, 1.0);
  CHECK(eigenvalue(sq, {0, 0}) == 1.0);
  CHECK(eigenvalue(sq, {0, 1}) == doctest::Approx(kFourPiSq + 1.0).epsilon(1e-15));
  CHECK(eigenvalue(sq, {0, 1}) == doctest::Approx(40.4784).epsilon(1e-6));

  const auto sheared = make_operator(0.5, 1.0, 1.0);
  // |1 - (0.5 + i)|² = 1.25
  const double form = testing::modulus_form_complex(sheared, {1, 1});
  CHECK(form == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(eigenvalue(sheared, {1, 1}) == doctest::Approx(kFourPiSq * 1.25 + 1.0).epsilon(1e-15));
  CHECK(eigenvalue(sheared, {1, 1}) == doctest::Approx(50.3480).epsilon(1e-5));
}

TEST_CASE("gram_matrix: entries and determinant") {
  const auto g = gram_matrix(make_operator(0.5, 2.0, 1.0));
  CHECK(g.w11 == 1.0);
  CHECK(g.w12 == -0.5);
  CHECK(g.w22 == 4.25);
  CHECK(g.determinant() == doctest::Approx(4.0).epsilon(1e-15));

  const auto id = gram_matrix(make_operator(0.0, 1.0, 1.0));
  CHECK(id.w11 == 1.0);
  CHECK(id.w12 == 0.0);
  CHECK(id.w22 == 1.0);

  const auto unit = normalized_gram_matrix(make_operator(0.3, 1.7, 1.0));
  CHECK(std::fabs(unit.determinant() - 1.0) <= 1e-14);
}

TEST_CASE("quadratic_form: both algebraic forms") {
  const auto sheared = make_operator(0.5, 1.0, 1.0);
  CHECK(quadratic_form(sheared, {1, 1}) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(testing::quadratic_form_expanded(sheared, {1, 1}) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(quadratic_form(sheared, {0, 0}) == 0.0);
  // mode (n = 2, m = 1): (2 - 0.3)² + 4
  const auto s2 = make_operator(0.3, 2.0, 1.0);
  CHECK(quadratic_form(s2, {1, 2}) == doctest::Approx(6.89).epsilon(1e-14));
  CHECK(testing::quadratic_form_expanded(s2, {1, 2}) == doctest::Approx(6.89).epsilon(1e-14));
  CHECK(gram_matrix(s2).apply(2.0, 1.0) == doctest::Approx(6.89).epsilon(1e-14));
}

TEST_CASE("quadratic_form: the printed (n² - mτ₁)² completion is not the expansion") {
  const auto spec = make_operator(0.3, 2.0, 1.0);
  const ModeIndex mode{1, 2};
  const double n = 2.0, m = 1.0;
  const double printed = (n * n - m * 0.3) * (n * n - m * 0.3) + m * m * 4.0;
  CHECK(std::fabs(printed - testing::quadratic_form_expanded(spec, mode)) > 1.0);
  CHECK(std::fabs(quadratic_form(spec, mode) - testing::quadratic_form_expanded(spec, mode)) <= 1e-14);
}

TEST_CASE("quadratic_form: lower bound and zero set on random modes") {
  const auto specs = testing::random_specs(20, 3);
  for (const auto& spec : specs) {
    for (int m = -4; m <= 4; ++m) {
      for (int n = -4; n <= 4; ++n) {
        const double a = quadratic_form(spec, {m, n});
        CHECK(a >= m * m * spec.tau2() * spec.tau2() * (1 - 1e-15));
        CHECK((a == 0.0) == (m == 0 && n == 0));
        CHECK(eigenvalue(spec, {m, n}) == eigenvalue(spec, {-m, -n}));
      }
    }
  }
}

TEST_CASE("spectrum: point reflection, τ₁-reflection, T-shift") {
  const int N = 6;
  for (double c : {0.2, 0.5, 0.9}) {
    const auto plus = make_operator(c, 1.3, 0.7);
    const auto minus = make_operator(-c, 1.3, 0.7);
    check_same_multiset(square_spectrum(plus, N), square_spectrum(minus, N), 1e-14);

    // τ₁ → τ₁ + 1 with n = n' + m over the parallelogram |m|, |n'| ≤ N.
    const auto shifted = make_operator(c + 1.0, 1.3, 0.7);
    std::vector<double> base, moved;
    for (int m = -N; m <= N; ++m) {
      for (int np = -N; np <= N; ++np) {
        base.push_back(quadratic_form(plus, {m, np}));
        moved.push_back(quadratic_form(shifted, {m, np + m}));
      }
    }
    check_same_multiset(base, moved, 1e-13);
  }
}
