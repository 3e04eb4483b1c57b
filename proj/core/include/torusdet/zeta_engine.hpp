#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include "torusdet/options.hpp"
#include "torusdet/torus_spectrum.hpp"

namespace torusdet {

enum class ZetaRoute { direct, mellin, subtraction };
enum class DetRoute { paper, corrected, oracle };

std::string_view to_string(ZetaRoute route) noexcept;
std::string_view to_string(DetRoute route) noexcept;
ZetaRoute parse_zeta_route(std::string_view name);
DetRoute parse_det_route(std::string_view name);

struct ZetaResult {
  std::complex<double> s;
  std::complex<double> value;
  double abs_error = 0.0;
  ZetaRoute route = ZetaRoute::subtraction;
};

/// A real value with an absolute error bar.
struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
};

/// ζ′(0) split by lattice sector:
///   psi1  m = n = 0            (−ln V₀)
///   psi2  n = 0, m ≠ 0         (single series carrying |τ|)
///   psi3  m = 0, n ≠ 0         (single series)
///   psi4  m ≠ 0, n ≠ 0         (double series)
struct PsiBreakdown {
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi3 = 0.0;
  double psi4 = 0.0;
  double total = 0.0;
  /// Certified truncation bounds for psi2, psi3, psi4.
  std::array<double, 3> series_tail_bounds{};
  std::size_t terms_used = 0;
  /// Some Bessel factor underflowed to zero inside the summed range.
  bool underflow = false;

  double abs_error() const noexcept {
    return series_tail_bounds[0] + series_tail_bounds[1] + series_tail_bounds[2];
  }
};

// --- ζ(s) -----------------------------------------------------------------

/// Σ l_{mn}^{-s} over the square |m|, |n| ≤ N plus the continuum integral of
/// l^{-s} outside [-N-½, N+½]². The error estimate is the midpoint-rule
/// Laplacian bound, O(N^{-2 Re s}). Requires Re s > 1.
ZetaResult zeta_direct(const OperatorSpec& spec, std::complex<double> s,
                       const EvalOptions& opts = {});

/// (1/Γ(s)) ∫₀^∞ t^{s-1} Θ(t) dt. Requires Re s > 1.
ZetaResult zeta_mellin(const OperatorSpec& spec, std::complex<double> s,
                       const EvalOptions& opts = {});

/// ζ(s) = F(s)/Γ(s) + V₀^{1-s}/(4π(s-1)) with F(s) = ∫₀^∞ t^{s-1} R(t) dt
/// entire. Valid for every s ≠ 1.
ZetaResult zeta_subtraction(const OperatorSpec& spec, std::complex<double> s,
                            const EvalOptions& opts = {});

// --- ζ′(0) ----------------------------------------------------------------

/// ζ′(0) = ∫₀^∞ R(t) dt/t + V₀(ln V₀ - 1)/(4π).
Estimate zeta_prime0_oracle(const OperatorSpec& spec, const EvalOptions& opts = {});

/// Central differences of zeta_subtraction at s = ±h for h = h_coarse and
/// h_fine, combined by one Richardson step.
Estimate zeta_prime0_finite_difference(const OperatorSpec& spec,
                                       const EvalOptions& opts = {},
                                       double h_coarse = 1e-3,
                                       double h_fine = 1e-4);

/// −ln V₀
double zeta1_prime0(const OperatorSpec& spec);

/// The published Bessel-series formula, term by term with K_{1/2}. Sectors
/// are folded onto positive indices (Σ_{n≠0} = 2Σ_{n≥1}); psi4 runs over
/// outer m, inner n.
PsiBreakdown psi_paper(const OperatorSpec& spec, const EvalOptions& opts = {});

/// The same formula after K_{1/2}(z) = √(π/2z) e^{-z}: every n-series is
/// c Σ q^n/n = -c ln(1 - q).
PsiBreakdown psi_closed_form(const OperatorSpec& spec, const EvalOptions& opts = {});

/// ζ′(0) from a Poisson resummation in n that keeps the phases e^{2πikmτ₁}
/// and the k = 0 sector:
///   V₀(ln V₀ - 1)/(4π) + (2√(τ₂V₀)/π) Σ_{p≥1} K₁(p√(V₀/τ₂))/p
///   - 2 ln(1 - e^{-√(V₀τ₂)})
///   - 4 Σ_{m≥1} Re ln(1 - exp(-√(V₀τ₂ + 4π²m²τ₂²) + 2πimτ₁))
Estimate psi_corrected(const OperatorSpec& spec, const EvalOptions& opts = {});

/// exp(−ζ′(0)) along the requested route.
double determinant(const OperatorSpec& spec, DetRoute route,
                   const EvalOptions& opts = {});

/// V₀ exp(−(psi2 + psi3 + psi4)): the factored form of the published
/// determinant.
double det_paper_factored(const PsiBreakdown& psi, const OperatorSpec& spec);

struct RouteValue {
  double psi = 0.0;
  /// Certified (series) or estimated (quadrature) error bar on psi.
  double psi_error = 0.0;
  double det = 0.0;
  bool ok = false;
  /// Error class and message when the route failed.
  std::string error;
};

struct DetReport {
  OperatorSpec spec;
  EvalOptions options;
  RouteValue paper;
  RouteValue closed;
  RouteValue corrected;
  RouteValue oracle;
  PsiBreakdown paper_parts;
  /// V₀ exp(−Σ series), compared against paper.det.
  double det_paper_factored = 0.0;
  double residual_paper_vs_oracle = 0.0;
  double residual_corrected_vs_oracle = 0.0;
  double residual_paper_vs_closed = 0.0;

  bool all_ok() const noexcept {
    return paper.ok && closed.ok && corrected.ok && oracle.ok;
  }
};

/// One determinant route with failures captured in the result. When parts is
/// non-null and route is paper, the sector breakdown is stored there.
RouteValue evaluate_route(const OperatorSpec& spec, DetRoute route,
                          const EvalOptions& opts = {},
                          PsiBreakdown* parts = nullptr);

/// Evaluates every route; failures are recorded per route, never thrown.
DetReport compare_routes(const OperatorSpec& spec, const EvalOptions& opts = {});

/// Γ(s)ζ(s) + 1/s near s = 0 against ζ′(0). Expansion:
///   Γ(s)ζ(s) + 1/s = (ζ(0) + 1)/s + ζ′(0) − γ ζ(0) + O(s)
struct GammaZetaRelation {
  double s = 0.0;
  double gamma_zeta_plus_inv_s = 0.0;
  double zeta0 = 0.0;
  double zeta_prime0 = 0.0;
  double measured_offset = 0.0;
  double predicted_offset = 0.0;
};

GammaZetaRelation measure_gamma_zeta_relation(const OperatorSpec& spec,
                                              double s = 1e-3,
                                              const EvalOptions& opts = {});

}  // namespace torusdet
