#include "torusdet/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "torusdet/errors.hpp"
#include "torusdet/numerics.hpp"

namespace torusdet {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;
// Lattice sums are ≥ 1, so this is a relative target at machine precision.
constexpr double kLatticeFloor = 1e-17;

struct RowSum {
  double value = 0.0;
  std::size_t reach = 0;
  double tail = 0.0;
};

// Σ_{j≥0} e^{-a (d0 + j)²} bound for the part not yet summed.
double gaussian_tail(double a, double d) {
  return std::exp(-a * d * d) / -std::expm1(-2.0 * a * d);
}

// Σ_n e^{-a (n - c)²}, skipping n = skip when requested.
RowSum gaussian_row(double a, double c, bool skip_zero, double target,
                    std::size_t& budget) {
  const auto n0 = static_cast<std::int64_t>(std::llround(c));
  numerics::CompensatedSum<double> acc;
  RowSum row;
  if (!(skip_zero && n0 == 0)) {
    const double d = static_cast<double>(n0) - c;
    acc.add(std::exp(-a * d * d));
  }
  for (int dir : {+1, -1}) {
    std::int64_t n = n0 + dir;
    std::size_t steps = 0;
    for (;;) {
      if (budget == 0) {
        throw BudgetExceeded("lattice sum term budget exhausted", acc.value(),
                             gaussian_tail(a, std::fabs(static_cast<double>(n) - c)));
      }
      --budget;
      const double d = std::fabs(static_cast<double>(n) - c);
      if (!(skip_zero && n == 0)) acc.add(std::exp(-a * d * d));
      ++steps;
      const double bound = gaussian_tail(a, d + 1.0);
      if (bound <= target) {
        row.tail += bound;
        break;
      }
      n += dir;
    }
    row.reach = std::max<std::size_t>(
        row.reach, static_cast<std::size_t>(std::llabs(n0)) + steps);
  }
  row.value = acc.value();
  return row;
}

HeatTraceSample sample_from(double t, double prefactor,
                            const detail::LatticeSum& s) {
  return {t, prefactor * s.value, s.reach, prefactor * s.tail_bound};
}

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("heat time must be positive and finite");
  }
}

double lattice_target(double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  return std::min(tol, kLatticeFloor);
}

}  // namespace

namespace detail {

LatticeSum gaussian_lattice_sum(double a, double b, double shift,
                                bool exclude_origin, double target,
                                std::size_t max_terms) {
  const double row_max = 1.0 + std::sqrt(kPi / a);
  const double row_target = target / (2.0 * (1.0 + std::sqrt(kPi / b)));
  std::size_t budget = max_terms;

  numerics::CompensatedSum<double> acc;
  LatticeSum out;
  double row_tails = 0.0;

  const RowSum centre = gaussian_row(a, 0.0, exclude_origin, row_target, budget);
  acc.add(centre.value);
  row_tails += centre.tail;
  out.reach = centre.reach;

  for (std::int64_t m = 1;; ++m) {
    const auto md = static_cast<double>(m);
    const double weight = std::exp(-b * md * md);
    for (double sign : {+1.0, -1.0}) {
      const RowSum row = gaussian_row(a, sign * md * shift, false, row_target, budget);
      acc.add(weight * row.value);
      row_tails += weight * row.tail;
      out.reach = std::max(out.reach, row.reach);
    }
    out.reach = std::max(out.reach, static_cast<std::size_t>(m));
    const double outer = 2.0 * row_max * gaussian_tail(b, md + 1.0);
    if (outer <= target / 2.0) {
      out.tail_bound = row_tails + outer;
      break;
    }
    if (budget == 0) {
      throw BudgetExceeded("lattice sum term budget exhausted", acc.value(), outer);
    }
  }
  out.value = acc.value();
  return out;
}

}  // namespace detail

double heat_crossover(const OperatorSpec& spec) { return spec.tau2() / (4.0 * kPi); }

HeatTraceSample heat_trace_direct(const OperatorSpec& spec, double t, double tol) {
  require_positive_time(t);
  const double tau2 = spec.tau2();
  const auto s = detail::gaussian_lattice_sum(kFourPiSq * t / tau2,
                                              kFourPiSq * tau2 * t, spec.tau1(),
                                              false, lattice_target(tol));
  return sample_from(t, std::exp(-spec.v0() * t), s);
}

HeatTraceSample heat_trace_dual(const OperatorSpec& spec, double t, double tol) {
  require_positive_time(t);
  const double tau2 = spec.tau2();
  const auto s = detail::gaussian_lattice_sum(1.0 / (4.0 * t * tau2),
                                              tau2 / (4.0 * t), -spec.tau1(),
                                              false, lattice_target(tol));
  return sample_from(t, std::exp(-spec.v0() * t) / (4.0 * kPi * t), s);
}

HeatTraceSample heat_trace(const OperatorSpec& spec, double t, double tol) {
  require_positive_time(t);
  return t < heat_crossover(spec) ? heat_trace_dual(spec, t, tol)
                                  : heat_trace_direct(spec, t, tol);
}

double heat_remainder(const OperatorSpec& spec, double t, double tol) {
  require_positive_time(t);
  const double weyl = std::exp(-spec.v0() * t) / (4.0 * kPi * t);
  if (t >= heat_crossover(spec)) return heat_trace_direct(spec, t, tol).value - weyl;
  const double tau2 = spec.tau2();
  const auto s = detail::gaussian_lattice_sum(1.0 / (4.0 * t * tau2),
                                              tau2 / (4.0 * t), -spec.tau1(),
                                              true, lattice_target(tol));
  return weyl * s.value;
}

PoissonSides poisson_lhs_rhs(double t, double v, std::size_t N) {
  require_positive_time(t);
  const auto limit = static_cast<std::int64_t>(N);
  numerics::CompensatedSum<double> lhs;
  numerics::CompensatedSum<double> rhs_re;
  numerics::CompensatedSum<double> rhs_im;
  for (std::int64_t n = -limit; n <= limit; ++n) {
    const double x = static_cast<double>(n) + v;
    lhs.add(std::exp(-kPi * t * x * x));
  }
  rhs_re.add(1.0);
  for (std::int64_t k = 1; k <= limit; ++k) {
    const auto kd = static_cast<double>(k);
    const double gauss = std::exp(-kPi * kd * kd / t);
    const double phase = 2.0 * kPi * kd * v;
    // ±k pair: e^{iφ} + e^{-iφ}
    const std::complex<double> plus = std::polar(gauss, phase);
    const std::complex<double> minus = std::polar(gauss, -phase);
    rhs_re.add(plus.real() + minus.real());
    rhs_im.add(plus.imag() + minus.imag());
  }
  if (std::fabs(rhs_im.value()) > 1e-14) {
    throw std::logic_error("poisson_lhs_rhs: imaginary parts failed to cancel");
  }
  return {lhs.value(), rhs_re.value() / std::sqrt(t)};
}

}  // namespace torusdet
