#include "torusdet/torus_spectrum.hpp"

#include <cmath>
#include <numbers>

#include "torusdet/errors.hpp"

namespace torusdet {

double OperatorSpec::modulus_abs() const noexcept {
  return std::hypot(tau1_, tau2_);
}

OperatorSpec make_operator(double tau1, double tau2, double v0) {
  if (!std::isfinite(tau1) || !std::isfinite(tau2) || !std::isfinite(v0)) {
    throw DomainError("operator parameters must be finite");
  }
  if (!(tau2 > 0.0)) {
    throw DomainError("modulus must have positive imaginary part");
  }
  if (!(v0 > 0.0)) throw DomainError("offset must be positive");
  return OperatorSpec(tau1, tau2, v0);
}

GramMatrix gram_matrix(const OperatorSpec& spec) {
  const double t1 = spec.tau1();
  const double t2 = spec.tau2();
  return {1.0, -t1, t1 * t1 + t2 * t2};
}

GramMatrix normalized_gram_matrix(const OperatorSpec& spec) {
  return gram_matrix(spec).scaled(1.0 / spec.tau2());
}

double quadratic_form(const OperatorSpec& spec, ModeIndex mode) {
  const auto n = static_cast<double>(mode.n);
  const auto m = static_cast<double>(mode.m);
  const double shifted = n - m * spec.tau1();
  const double vertical = m * spec.tau2();
  return shifted * shifted + vertical * vertical;
}

double eigenvalue(const OperatorSpec& spec, ModeIndex mode) {
  constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
  return kFourPiSq / spec.tau2() * quadratic_form(spec, mode) + spec.v0();
}

}  // namespace torusdet
