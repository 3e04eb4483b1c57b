#pragma once

#include <complex>

#include "torusdet/numerics.hpp"

namespace torusdet {

/// Order ν of a modified Bessel function of the second kind.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);

  double nu() const noexcept { return nu_; }
  /// True iff 2ν is an odd integer, where K_ν has an elementary closed form.
  bool is_half_integer() const noexcept;

 private:
  double nu_;
};

struct BesselValue {
  double value = 0.0;
  /// e^{-z} underflowed and the value was flushed to zero.
  bool underflow = false;
};

/// Γ(s) for real s; throws DomainError at s = 0, -1, -2, ...
double gamma_fn(double s);

/// Γ(s) for complex s (Lanczos, g = 7). Throws DomainError at the poles.
std::complex<double> gamma_fn(std::complex<double> s);

/// 1/Γ(s), entire; exactly zero at the poles of Γ.
std::complex<double> reciprocal_gamma(std::complex<double> s);

/// K_{1/2}(z) = K_{-1/2}(z) = √(π/(2z)) e^{-z}.
double bessel_k_half(double z);
BesselValue bessel_k_half_checked(double z);

/// K_ν(z) = ½ ∫₀^∞ x^{ν-1} exp(-(z/2)(x + 1/x)) dx, evaluated by half-line
/// quadrature. No closed-form shortcut is taken for any order.
double bessel_k(BesselOrder nu, double z,
                const numerics::QuadOptions& opts = {1e-12, 1'000'000});

/// Same value, with closed forms for half-integer orders and quadrature
/// otherwise.
double bessel_k_fast(BesselOrder nu, double z,
                     const numerics::QuadOptions& opts = {1e-12, 1'000'000});

/// Leading small-argument behaviour (ν-1)! 2^{ν-1} / z^ν, integer ν ≥ 1 only.
double k_small_z_limit(double nu, double z);

/// |∫₀^∞ x^{ν-1} e^{-β/x - αx} dx - 2 (β/α)^{ν/2} K_ν(2√(βα))|, with the
/// left side integrated directly and K_ν taken from bessel_k_fast.
double check_k_integral_identity(double nu, double alpha, double beta,
                                 const numerics::QuadOptions& opts = {1e-12,
                                                                      1'000'000});

}  // namespace torusdet
