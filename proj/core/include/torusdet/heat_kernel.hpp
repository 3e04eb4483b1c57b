#pragma once

#include <cstddef>

#include "torusdet/torus_spectrum.hpp"

namespace torusdet {

struct HeatTraceSample {
  double t = 0.0;
  double value = 0.0;
  /// Largest |lattice index| reached by the truncated sum.
  std::size_t truncation_N = 0;
  double tail_bound = 0.0;
};

/// Θ(t) = e^{-V₀t} Σ_{m,n} exp(-(4π²t/τ₂) A_{nm}). Dispatches to the direct
/// lattice sum for t ≥ τ₂/(4π) and to the Poisson-dual sum below it.
HeatTraceSample heat_trace(const OperatorSpec& spec, double t, double tol = 1e-12);

/// Θ(t) from the direct lattice sum only.
HeatTraceSample heat_trace_direct(const OperatorSpec& spec, double t,
                                  double tol = 1e-12);

/// Θ(t) = e^{-V₀t}/(4πt) Σ_{w∈ℤ²} exp(-(τ₂/(4t)) wᵗ(Ω′)⁻¹w), the two-fold
/// Poisson resummation of the direct sum.
HeatTraceSample heat_trace_dual(const OperatorSpec& spec, double t,
                                double tol = 1e-12);

/// R(t) = Θ(t) - e^{-V₀t}/(4πt). Below the crossover this is evaluated as the
/// dual sum without its w = 0 term, so there is no cancellation.
double heat_remainder(const OperatorSpec& spec, double t, double tol = 1e-12);

/// t below which heat_trace switches to the dual representation.
double heat_crossover(const OperatorSpec& spec);

struct PoissonSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of Σ_n e^{-πt(n+v)²} = t^{-1/2} Σ_k e^{2πikv - πk²/t}, each
/// truncated to |index| ≤ N. The right side is real: the imaginary parts of
/// the ±k terms cancel.
PoissonSides poisson_lhs_rhs(double t, double v, std::size_t N);

namespace detail {

struct LatticeSum {
  double value = 0.0;
  std::size_t reach = 0;
  double tail_bound = 0.0;
};

/// Σ_m e^{-b m²} Σ_n e^{-a (n - m·shift)²}, optionally without (0, 0).
/// Each Gaussian row is summed outward from its centre until the geometric
/// tail bound drops below `target`.
LatticeSum gaussian_lattice_sum(double a, double b, double shift,
                                bool exclude_origin, double target,
                                std::size_t max_terms = 1'000'000);

}  // namespace detail
}  // namespace torusdet
