#include "torusdet/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "torusdet/errors.hpp"

namespace torusdet {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double s) { return s <= 0.0 && std::floor(s) == s; }

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> lanczos_gamma(std::complex<double> s) {
  if (s.real() < 0.5) {
    // Γ(s) Γ(1-s) = π / sin(πs)
    return kPi / (std::sin(kPi * s) * lanczos_gamma(1.0 - s));
  }
  s -= 1.0;
  std::complex<double> x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    x += kLanczos[i] / (s + static_cast<double>(i));
  }
  const std::complex<double> t = s + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, s + 0.5) * std::exp(-t) * x;
}

// Integrand of the K_ν representation, in log space so that x^{ν-1} never
// overflows where the exponential factor vanishes.
double k_integrand(double nu, double half_z, double x) {
  return std::exp((nu - 1.0) * std::log(x) - half_z * (x + 1.0 / x));
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!std::isfinite(nu)) throw DomainError("Bessel order must be finite");
}

bool BesselOrder::is_half_integer() const noexcept {
  const double twice = 2.0 * nu_;
  return std::floor(twice) == twice && std::fmod(std::fabs(twice), 2.0) == 1.0;
}

double gamma_fn(double s) {
  if (!std::isfinite(s)) throw DomainError("gamma_fn: non-finite argument");
  if (is_nonpositive_integer(s)) {
    throw DomainError("gamma_fn: pole at non-positive integer");
  }
  return std::tgamma(s);
}

std::complex<double> gamma_fn(std::complex<double> s) {
  if (s.imag() == 0.0) return gamma_fn(s.real());
  return lanczos_gamma(s);
}

std::complex<double> reciprocal_gamma(std::complex<double> s) {
  if (s.imag() == 0.0 && is_nonpositive_integer(s.real())) return 0.0;
  if (s.imag() == 0.0) return 1.0 / std::tgamma(s.real());
  return 1.0 / lanczos_gamma(s);
}

BesselValue bessel_k_half_checked(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("bessel_k_half: argument must be positive and finite");
  }
  const double decay = std::exp(-z);
  if (decay == 0.0) return {0.0, true};
  return {std::sqrt(kPi / (2.0 * z)) * decay, false};
}

double bessel_k_half(double z) { return bessel_k_half_checked(z).value; }

double bessel_k(BesselOrder order, double z, const numerics::QuadOptions& opts) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("bessel_k: argument must be positive and finite");
  }
  const double nu = order.nu();
  const double half_z = z / 2.0;
  numerics::QuadOptions inner = opts;
  inner.tol_abs = 2.0 * opts.tol_abs;
  const auto r = numerics::integrate_halfline(
      [nu, half_z](double x) { return k_integrand(nu, half_z, x); }, inner);
  return 0.5 * r.value;
}

double bessel_k_fast(BesselOrder order, double z,
                     const numerics::QuadOptions& opts) {
  if (!order.is_half_integer()) return bessel_k(order, z, opts);
  // Upward recurrence K_{ν+1} = K_{ν-1} + (2ν/z) K_ν from K_{1/2} = K_{-1/2}.
  const double target = std::fabs(order.nu());
  double prev = bessel_k_half(z);  // K_{-1/2}
  double cur = prev;               // K_{1/2}
  for (double nu = 0.5; nu < target; nu += 1.0) {
    const double next = prev + (2.0 * nu / z) * cur;
    prev = cur;
    cur = next;
  }
  return cur;
}

double k_small_z_limit(double nu, double z) {
  if (!(nu >= 1.0) || std::floor(nu) != nu) {
    throw DomainError(
        "k_small_z_limit: defined here for integer orders nu >= 1 only");
  }
  if (!(z > 0.0)) throw DomainError("k_small_z_limit: z must be positive");
  const double factorial = std::tgamma(nu);  // (ν-1)!
  return factorial * std::pow(2.0, nu - 1.0) / std::pow(z, nu);
}

double check_k_integral_identity(double nu, double alpha, double beta,
                                 const numerics::QuadOptions& opts) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw DomainError("check_k_integral_identity: alpha, beta must be positive");
  }
  const auto lhs = numerics::integrate_halfline(
      [=](double x) {
        return std::exp((nu - 1.0) * std::log(x) - beta / x - alpha * x);
      },
      opts);
  const double rhs = 2.0 * std::pow(beta / alpha, nu / 2.0) *
                     bessel_k_fast(BesselOrder(nu), 2.0 * std::sqrt(beta * alpha),
                                   opts);
  return std::fabs(lhs.value - rhs);
}

}  // namespace torusdet
