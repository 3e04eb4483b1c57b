#include "torusdet/zeta_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>

#include "torusdet/errors.hpp"
#include "torusdet/heat_kernel.hpp"
#include "torusdet/numerics.hpp"
#include "torusdet/special_functions.hpp"

namespace torusdet {
namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;
// Heat traces inside quadratures are summed to machine precision.
constexpr double kTraceTol = 1e-16;

numerics::QuadOptions quad_options(const EvalOptions& opts, double tol) {
  return {tol, opts.max_evaluations};
}

numerics::SeriesOptions series_options(const EvalOptions& opts, double tol,
                                       std::size_t chunk = 64) {
  return {tol, opts.max_terms, chunk};
}

// t^{s-1}·g, zero whenever g is, so huge powers never meet vanishing weights.
cplx mellin_weight(cplx s, double t, double g) {
  if (g == 0.0) return 0.0;
  if (s.imag() == 0.0) return std::pow(t, s.real() - 1.0) * g;
  return std::exp((s - 1.0) * std::log(t)) * g;
}

cplx power_neg(double base, cplx s) {
  if (s.imag() == 0.0) return std::pow(base, -s.real());
  return std::exp(-s * std::log(base));
}

// Σ_{n>N} q^n / n ≤ q^{N+1} / ((N+1)(1-q))
double log_series_tail(double q, std::size_t N) {
  const auto next = static_cast<double>(N + 1);
  return std::pow(q, next) / (next * -std::expm1(std::log(q)));
}

// Bound on Σ_{m>M} c·(-ln(1-q_m)) with q_m ≤ e^{-2πτ₂m}: each term is at most
// c·q_m/(1-q_m).
double sector_tail(double c, double tau2, double q_next, std::size_t M) {
  const double step = 2.0 * kPi * tau2;
  const double first = std::exp(-step * static_cast<double>(M + 1));
  return c / (1.0 - q_next) * first / -std::expm1(-step);
}

double mode_decay(const OperatorSpec& spec, std::size_t m) {
  const double md = static_cast<double>(m);
  const double tau2 = spec.tau2();
  return std::sqrt(spec.v0() * tau2 + kFourPiSq * md * md * tau2 * tau2);
}

template <class Fn>
RouteValue run_route(Fn&& fn) {
  RouteValue out;
  try {
    const Estimate e = fn();
    out.psi = e.value;
    out.psi_error = e.abs_error;
    out.det = std::exp(-e.value);
    out.ok = true;
  } catch (const BudgetExceeded& ex) {
    out.psi = ex.best_estimate();
    out.psi_error = ex.error_estimate();
    out.det = std::exp(-out.psi);
    out.error = std::string("budget_exceeded: ") + ex.what();
  } catch (const DomainError& ex) {
    out.psi = std::numeric_limits<double>::quiet_NaN();
    out.psi_error = out.psi;
    out.det = out.psi;
    out.error = std::string("domain_error: ") + ex.what();
  }
  return out;
}

double residual(const RouteValue& a, const RouteValue& b) {
  if (!a.ok || !b.ok) return std::numeric_limits<double>::quiet_NaN();
  return std::fabs(a.psi - b.psi);
}

}  // namespace

std::string_view to_string(ZetaRoute route) noexcept {
  switch (route) {
    case ZetaRoute::direct: return "direct";
    case ZetaRoute::mellin: return "mellin";
    case ZetaRoute::subtraction: return "subtraction";
  }
  return "unknown";
}

std::string_view to_string(DetRoute route) noexcept {
  switch (route) {
    case DetRoute::paper: return "paper";
    case DetRoute::corrected: return "corrected";
    case DetRoute::oracle: return "oracle";
  }
  return "unknown";
}

ZetaRoute parse_zeta_route(std::string_view name) {
  if (name == "direct") return ZetaRoute::direct;
  if (name == "mellin") return ZetaRoute::mellin;
  if (name == "subtraction") return ZetaRoute::subtraction;
  throw DomainError("unknown zeta route: " + std::string(name));
}

DetRoute parse_det_route(std::string_view name) {
  if (name == "paper") return DetRoute::paper;
  if (name == "corrected") return DetRoute::corrected;
  if (name == "oracle") return DetRoute::oracle;
  throw DomainError("unknown determinant route: " + std::string(name));
}

// ---------------------------------------------------------------------------
// ζ(s) routes

ZetaResult zeta_direct(const OperatorSpec& spec, cplx s, const EvalOptions& opts) {
  const double sigma = s.real();
  if (!(sigma > 1.0)) throw DomainError("direct sum diverges for Re(s) <= 1");

  const double tau1 = spec.tau1();
  const double tau2 = spec.tau2();
  const double v0 = spec.v0();
  const double scale = kFourPiSq / tau2;

  // Eigenvalues of the quadratic form (n, m) ↦ scale·|n - mτ|².
  const double trace = 1.0 + tau1 * tau1 + tau2 * tau2;
  const double det = tau2 * tau2;
  const double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
  const double lam_max = scale * (trace + disc) / 2.0;
  const double lam_min = scale * 2.0 * det / (trace + disc);

  // Midpoint rule per unit cell: Σ f(c) = ∫ f - (1/24) ∫ Δf + O(∂⁴f). Both
  // integrals over the outside of [-L, L]² are evaluated below; the error
  // estimate bounds the fourth-derivative remainder using
  // |∂⁴_e l^{-s}| ≤ (16|(s)₄| + 48|(s)₃| + 12|(s)₂|) λ_max² l^{-σ-2}
  // integrated over |x| > L, with a ×4 margin for the mixed terms.
  const double abs_s = std::abs(s);
  const double p2 = abs_s * std::abs(s + 1.0);
  const double p3 = p2 * std::abs(s + 2.0);
  const double p4 = p3 * std::abs(s + 3.0);
  const double fourth = (16.0 * p4 + 48.0 * p3 + 12.0 * p2) * lam_max * lam_max;
  const double weight = 2.0 / 1920.0 + 5.0 / 576.0;
  const double coef = 4.0 * weight * fourth * kPi / (sigma + 1.0) *
                      std::pow(lam_min, -sigma - 2.0);
  const double decay = 2.0 * sigma + 2.0;
  auto sum_error = [&](double half_width) {
    return coef * std::pow(half_width, -decay);
  };

  const double sum_tol = opts.tol / 2.0;
  const double wanted = std::pow(coef / sum_tol, 1.0 / decay) - 0.5;
  const auto side = static_cast<std::int64_t>(
      (std::floor(std::sqrt(static_cast<double>(opts.max_terms))) - 1.0) / 2.0);
  std::int64_t N = std::max<std::int64_t>(8, static_cast<std::int64_t>(std::ceil(wanted)));
  const bool over_budget = N > side;
  if (over_budget) N = side;

  numerics::CompensatedSum<cplx> acc;
  for (std::int64_t m = -N; m <= N; ++m) {
    const auto md = static_cast<double>(m);
    for (std::int64_t n = -N; n <= N; ++n) {
      const double shifted = static_cast<double>(n) - md * tau1;
      const double vertical = md * tau2;
      const double lambda = scale * (shifted * shifted + vertical * vertical) + v0;
      acc.add(power_neg(lambda, s));
    }
  }

  const double L = static_cast<double>(N) + 0.5;
  const double abs_tau_sq = tau1 * tau1 + tau2 * tau2;
  auto level = [&](double n, double m) {
    const double shifted = n - m * tau1;
    return scale * (shifted * shifted + tau2 * tau2 * m * m) + v0;
  };

  // ∫ l^{-s} outside the square: radial part in closed form.
  auto angular = [&](double theta) -> cplx {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const double q = scale * ((c - tau1 * sn) * (c - tau1 * sn) + tau2 * tau2 * sn * sn);
    const double r = L / std::max(std::fabs(c), std::fabs(sn));
    return power_neg(r * r * q + v0, s - 1.0) / (2.0 * q * (s - 1.0));
  };
  // ∫ Δ l^{-s} outside the square = flux of ∇l^{-s} through its edges,
  // with -∇l^{-s}·x̂ = 2s l^{-s-1} (Ax)₁ on x = L and likewise on m = L.
  auto right_edge = [&](double m) -> cplx {
    return 2.0 * s * power_neg(level(L, m), s + 1.0) * scale * (L - tau1 * m);
  };
  auto top_edge = [&](double n) -> cplx {
    return 2.0 * s * power_neg(level(n, L), s + 1.0) * scale * (-tau1 * n + abs_tau_sq * L);
  };

  const auto qopts = quad_options(opts, opts.tol / 16.0);
  cplx tail = 0.0;
  double quad_err = 0.0;
  const double quarter = kPi / 4.0;
  for (int k = 0; k < 4; ++k) {
    const auto r = numerics::integrate_interval_complex(angular, k * quarter,
                                                        (k + 1) * quarter, qopts);
    tail += r.value;
    quad_err += 2.0 * r.abs_error_estimate;
  }
  cplx flux = 0.0;
  for (const std::function<cplx(double)>& edge :
       {std::function<cplx(double)>(right_edge), std::function<cplx(double)>(top_edge)}) {
    for (double sign : {-1.0, 1.0}) {
      const auto r = numerics::integrate_interval_complex(
          edge, std::min(0.0, sign * L), std::max(0.0, sign * L), qopts);
      flux += r.value;
      quad_err += 2.0 / 24.0 * r.abs_error_estimate;
    }
  }
  // x ↦ -x symmetry doubles both half-plane integrals.
  const cplx value = acc.value() + 2.0 * tail - 2.0 * flux / 24.0;
  const double err = sum_error(L) + quad_err;

  if (over_budget) {
    throw BudgetExceeded("zeta_direct: lattice budget too small for tolerance",
                         value.real(), err);
  }
  return {s, value, err, ZetaRoute::direct};
}

ZetaResult zeta_mellin(const OperatorSpec& spec, cplx s, const EvalOptions& opts) {
  if (!(s.real() > 1.0)) {
    throw DomainError("Mellin integral of the full heat trace diverges for Re(s) <= 1");
  }
  const auto integrand = [&](double t) -> cplx {
    return mellin_weight(s, t, heat_trace(spec, t, kTraceTol).value);
  };
  const auto r = numerics::integrate_halfline_complex(integrand, quad_options(opts, opts.tol));
  const cplx rg = reciprocal_gamma(s);
  return {s, r.value * rg, r.abs_error_estimate * std::abs(rg), ZetaRoute::mellin};
}

namespace {

numerics::ComplexQuadResult remainder_mellin(const OperatorSpec& spec, cplx s,
                                             const EvalOptions& opts) {
  const auto integrand = [&](double t) -> cplx {
    return mellin_weight(s, t, heat_remainder(spec, t, kTraceTol));
  };
  return numerics::integrate_halfline_complex(integrand, quad_options(opts, opts.tol));
}

cplx weyl_term(const OperatorSpec& spec, cplx s) {
  const double v0 = spec.v0();
  return std::exp((1.0 - s) * std::log(v0)) / (4.0 * kPi * (s - 1.0));
}

}  // namespace

ZetaResult zeta_subtraction(const OperatorSpec& spec, cplx s, const EvalOptions& opts) {
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta has a simple pole at s = 1");
  const cplx rg = reciprocal_gamma(s);
  if (rg == 0.0) {
    // F(s) is finite, so only the Weyl term survives at the poles of Γ.
    return {s, weyl_term(spec, s), 0.0, ZetaRoute::subtraction};
  }
  const auto f = remainder_mellin(spec, s, opts);
  return {s, f.value * rg + weyl_term(spec, s), f.abs_error_estimate * std::abs(rg),
          ZetaRoute::subtraction};
}

// ---------------------------------------------------------------------------
// ζ′(0)

Estimate zeta_prime0_oracle(const OperatorSpec& spec, const EvalOptions& opts) {
  const auto f0 = remainder_mellin(spec, 0.0, opts);
  const double v0 = spec.v0();
  return {f0.value.real() + v0 * (std::log(v0) - 1.0) / (4.0 * kPi),
          f0.abs_error_estimate};
}

Estimate zeta_prime0_finite_difference(const OperatorSpec& spec,
                                       const EvalOptions& opts, double h_coarse,
                                       double h_fine) {
  auto central = [&](double h) {
    const double up = zeta_subtraction(spec, h, opts).value.real();
    const double down = zeta_subtraction(spec, -h, opts).value.real();
    return (up - down) / (2.0 * h);
  };
  const double coarse = central(h_coarse);
  const double fine = central(h_fine);
  const double ratio = (h_coarse / h_fine) * (h_coarse / h_fine);
  const double extrapolated = (ratio * fine - coarse) / (ratio - 1.0);
  return {extrapolated, std::fabs(extrapolated - fine) + opts.tol};
}

double zeta1_prime0(const OperatorSpec& spec) { return -std::log(spec.v0()); }

PsiBreakdown psi_paper(const OperatorSpec& spec, const EvalOptions& opts) {
  const double tau2 = spec.tau2();
  const double v0 = spec.v0();
  const double abs_tau = spec.modulus_abs();
  const double root = std::sqrt(v0 * tau2);
  const double prefactor = 2.0 * std::pow(tau2, 0.25) * std::sqrt(2.0 / kPi);
  const double v0_quarter = std::pow(v0, 0.25);
  const double part_tol = opts.tol / 4.0;

  PsiBreakdown out;
  auto bessel = [&out](double z) {
    const BesselValue k = bessel_k_half_checked(z);
    out.underflow = out.underflow || k.underflow;
    return k.value;
  };

  out.psi1 = zeta1_prime0(spec);

  // n = 0, m ≠ 0
  {
    const double q = std::exp(-root / abs_tau);
    const auto r = numerics::sum_tail_bounded(
        [&](std::size_t n) {
          const double nd = static_cast<double>(n);
          return prefactor * std::sqrt(abs_tau) * v0_quarter / std::sqrt(nd) *
                 bessel(nd * root / abs_tau);
        },
        [&](std::size_t N) { return 2.0 * abs_tau * log_series_tail(q, N); },
        series_options(opts, part_tol, 1));
    out.psi2 = r.value;
    out.series_tail_bounds[0] = r.tail_bound;
    out.terms_used += r.terms_used;
  }

  // m = 0, n ≠ 0
  {
    const double q = std::exp(-root);
    const auto r = numerics::sum_tail_bounded(
        [&](std::size_t n) {
          const double nd = static_cast<double>(n);
          return prefactor * v0_quarter / std::sqrt(nd) * bessel(nd * root);
        },
        [&](std::size_t N) { return 2.0 * log_series_tail(q, N); },
        series_options(opts, part_tol, 1));
    out.psi3 = r.value;
    out.series_tail_bounds[1] = r.tail_bound;
    out.terms_used += r.terms_used;
  }

  // m, n ≠ 0: outer m, inner n
  {
    double inner_tails = 0.0;
    const auto outer = numerics::sum_tail_bounded(
        [&](std::size_t m) {
          const double md = static_cast<double>(m);
          const double decay = mode_decay(spec, m);
          const double mass_quarter = std::pow(v0 + kFourPiSq * md * md * tau2, 0.25);
          const double q = std::exp(-decay);
          const double inner_tol = part_tol / 2.0 * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(m, 900)));
          const auto r = numerics::sum_tail_bounded(
              [&](std::size_t n) {
                const double nd = static_cast<double>(n);
                return prefactor * 2.0 * mass_quarter / std::sqrt(nd) * bessel(nd * decay);
              },
              [&](std::size_t N) { return 4.0 * log_series_tail(q, N); },
              series_options(opts, std::max(inner_tol, std::numeric_limits<double>::min()), 1));
          inner_tails += r.tail_bound;
          out.terms_used += r.terms_used;
          return r.value;
        },
        [&](std::size_t M) {
          return sector_tail(4.0, tau2, std::exp(-mode_decay(spec, M + 1)), M);
        },
        series_options(opts, part_tol / 2.0, 1));
    out.psi4 = outer.value;
    out.series_tail_bounds[2] = outer.tail_bound + inner_tails;
  }

  out.total = out.psi1 + out.psi2 + out.psi3 + out.psi4;
  return out;
}

PsiBreakdown psi_closed_form(const OperatorSpec& spec, const EvalOptions& opts) {
  const double tau2 = spec.tau2();
  const double v0 = spec.v0();
  const double abs_tau = spec.modulus_abs();
  const double root = std::sqrt(v0 * tau2);

  PsiBreakdown out;
  out.psi1 = zeta1_prime0(spec);
  out.psi2 = -2.0 * abs_tau * std::log1p(-std::exp(-root / abs_tau));
  out.psi3 = -2.0 * std::log1p(-std::exp(-root));
  const auto r = numerics::sum_tail_bounded(
      [&](std::size_t m) { return -4.0 * std::log1p(-std::exp(-mode_decay(spec, m))); },
      [&](std::size_t M) {
        return sector_tail(4.0, tau2, std::exp(-mode_decay(spec, M + 1)), M);
      },
      series_options(opts, opts.tol / 4.0));
  out.psi4 = r.value;
  out.series_tail_bounds = {0.0, 0.0, r.tail_bound};
  out.terms_used = r.terms_used + 2;
  out.total = out.psi1 + out.psi2 + out.psi3 + out.psi4;
  return out;
}

Estimate psi_corrected(const OperatorSpec& spec, const EvalOptions& opts) {
  const double tau1 = spec.tau1();
  const double tau2 = spec.tau2();
  const double v0 = spec.v0();
  const double part_tol = opts.tol / 4.0;

  const double weyl = v0 * (std::log(v0) - 1.0) / (4.0 * kPi);

  // k = 0 sector continued in m: (2√(τ₂V₀)/π) Σ_p K₁(p a)/p, a = √(V₀/τ₂).
  // Tail: K₁ ≤ K_{3/2}(x) = √(π/2x) e^{-x}(1 + 1/x), ratio ≤ e^{-a} per step.
  const double coef = 2.0 * std::sqrt(tau2 * v0) / kPi;
  const double a = std::sqrt(v0 / tau2);
  constexpr double kBesselTol = 1e-13;
  const numerics::QuadOptions bessel_opts{kBesselTol, opts.max_evaluations};
  const auto k1 = numerics::sum_tail_bounded(
      [&](std::size_t p) {
        const double pd = static_cast<double>(p);
        return bessel_k(BesselOrder(1.0), pd * a, bessel_opts) / pd;
      },
      [&](std::size_t N) {
        const double x = static_cast<double>(N + 1) * a;
        const double k32 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * (1.0 + 1.0 / x);
        return coef * k32 / static_cast<double>(N + 1) / -std::expm1(-a);
      },
      series_options(opts, part_tol, 8));
  const double bessel_sector = coef * k1.value;
  const double bessel_quad_err =
      coef * 2.0 * kBesselTol * (1.0 + std::log(static_cast<double>(k1.terms_used)));

  // m = 0, k ≠ 0
  const double zero_row = -2.0 * std::log1p(-std::exp(-std::sqrt(v0 * tau2)));

  // m ≠ 0, k ≠ 0: -4 Re ln(1 - q e^{iφ}) = -2 ln(1 - 2q cos φ + q²)
  const auto rows = numerics::sum_tail_bounded(
      [&](std::size_t m) {
        const double q = std::exp(-mode_decay(spec, m));
        const double phi = 2.0 * kPi * static_cast<double>(m) * tau1;
        return -2.0 * std::log1p(q * q - 2.0 * q * std::cos(phi));
      },
      [&](std::size_t M) {
        return sector_tail(4.0, tau2, std::exp(-mode_decay(spec, M + 1)), M);
      },
      series_options(opts, part_tol));

  return {weyl + bessel_sector + zero_row + rows.value,
          k1.tail_bound + bessel_quad_err + rows.tail_bound};
}

double determinant(const OperatorSpec& spec, DetRoute route, const EvalOptions& opts) {
  switch (route) {
    case DetRoute::paper: return std::exp(-psi_paper(spec, opts).total);
    case DetRoute::corrected: return std::exp(-psi_corrected(spec, opts).value);
    case DetRoute::oracle: return std::exp(-zeta_prime0_oracle(spec, opts).value);
  }
  throw DomainError("unknown determinant route");
}

double det_paper_factored(const PsiBreakdown& psi, const OperatorSpec& spec) {
  return spec.v0() * std::exp(-(psi.psi2 + psi.psi3 + psi.psi4));
}

RouteValue evaluate_route(const OperatorSpec& spec, DetRoute route,
                          const EvalOptions& opts, PsiBreakdown* parts) {
  switch (route) {
    case DetRoute::paper:
      return run_route([&] {
        const auto p = psi_paper(spec, opts);
        if (parts) *parts = p;
        return Estimate{p.total, p.abs_error()};
      });
    case DetRoute::corrected:
      return run_route([&] { return psi_corrected(spec, opts); });
    case DetRoute::oracle:
      return run_route([&] { return zeta_prime0_oracle(spec, opts); });
  }
  throw DomainError("unknown determinant route");
}

DetReport compare_routes(const OperatorSpec& spec, const EvalOptions& opts) {
  DetReport report{spec, opts, {}, {}, {}, {}, {}, 0.0, 0.0, 0.0, 0.0};

  auto oracle = std::async(std::launch::async, [&] {
    return run_route([&] { return zeta_prime0_oracle(spec, opts); });
  });
  auto corrected = std::async(std::launch::async, [&] {
    return run_route([&] { return psi_corrected(spec, opts); });
  });

  report.paper = run_route([&] {
    report.paper_parts = psi_paper(spec, opts);
    return Estimate{report.paper_parts.total, report.paper_parts.abs_error()};
  });
  report.closed = run_route([&] {
    const auto p = psi_closed_form(spec, opts);
    return Estimate{p.total, p.abs_error()};
  });
  report.corrected = corrected.get();
  report.oracle = oracle.get();

  report.det_paper_factored = report.paper.ok
                                  ? det_paper_factored(report.paper_parts, spec)
                                  : std::numeric_limits<double>::quiet_NaN();
  report.residual_paper_vs_oracle = residual(report.paper, report.oracle);
  report.residual_corrected_vs_oracle = residual(report.corrected, report.oracle);
  report.residual_paper_vs_closed = residual(report.paper, report.closed);
  return report;
}

GammaZetaRelation measure_gamma_zeta_relation(const OperatorSpec& spec, double s,
                                              const EvalOptions& opts) {
  GammaZetaRelation out;
  out.s = s;
  const double zeta_s = zeta_subtraction(spec, s, opts).value.real();
  out.gamma_zeta_plus_inv_s = gamma_fn(s) * zeta_s + 1.0 / s;
  out.zeta0 = zeta_subtraction(spec, 0.0, opts).value.real();
  out.zeta_prime0 = zeta_prime0_oracle(spec, opts).value;
  out.measured_offset = out.gamma_zeta_plus_inv_s - out.zeta_prime0;
  out.predicted_offset =
      (out.zeta0 + 1.0) / s - std::numbers::egamma * out.zeta0;
  return out;
}

}  // namespace torusdet
