#pragma once

// Reference computations that share no code path with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "torusdet/torus_spectrum.hpp"

namespace torusdet::testing {

/// A_{nm} in expanded form n² − 2nmτ₁ + m²(τ₁² + τ₂²).
inline double quadratic_form_expanded(const OperatorSpec& spec, ModeIndex mode) {
  const auto n = static_cast<double>(mode.n);
  const auto m = static_cast<double>(mode.m);
  const double t1 = spec.tau1();
  const double t2 = spec.tau2();
  return n * n - 2.0 * n * m * t1 + m * m * (t1 * t1 + t2 * t2);
}

/// |n − mτ|² via complex arithmetic.
inline double modulus_form_complex(const OperatorSpec& spec, ModeIndex mode) {
  const std::complex<double> tau(spec.tau1(), spec.tau2());
  return std::norm(static_cast<double>(mode.n) - static_cast<double>(mode.m) * tau);
}

/// Plain partial sum Σ_{n=1}^{N} f(n), no tail logic.
template <class F>
double partial_sum(F&& f, std::size_t N) {
  long double acc = 0.0L;
  for (std::size_t n = 1; n <= N; ++n) acc += f(n);
  return static_cast<double>(acc);
}

/// Brute-force square lattice sum Σ_{|m|,|n|≤N} e^{-l_{mn} t}.
inline double heat_trace_brute(const OperatorSpec& spec, double t, int N) {
  constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
  long double acc = 0.0L;
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) {
      const double a = quadratic_form_expanded(spec, {m, n});
      acc += std::exp(-(kFourPiSq / spec.tau2() * a + spec.v0()) * t);
    }
  }
  return static_cast<double>(acc);
}

/// Brute-force 2-D Poisson dual Σ_w exp(−(τ₂/4t) wᵗ(Ω′)⁻¹w)·e^{−V₀t}/(4πt),
/// with (Ω′)⁻¹ inverted explicitly.
inline double heat_trace_dual_brute(const OperatorSpec& spec, double t, int N) {
  const double t1 = spec.tau1();
  const double t2 = spec.tau2();
  const double det = t2 * t2;
  const double i11 = (t1 * t1 + t2 * t2) / det;
  const double i12 = t1 / det;
  const double i22 = 1.0 / det;
  long double acc = 0.0L;
  for (int a = -N; a <= N; ++a) {
    for (int b = -N; b <= N; ++b) {
      const double q = i11 * a * a + 2.0 * i12 * a * b + i22 * b * b;
      acc += std::exp(-(t2 / (4.0 * t)) * q);
    }
  }
  return static_cast<double>(acc) * std::exp(-spec.v0() * t) /
         (4.0 * std::numbers::pi * t);
}

}  // namespace torusdet::testing
