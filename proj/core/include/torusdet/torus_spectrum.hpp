#pragma once

#include <cstdint>

namespace torusdet {

/// The massive Laplace-type operator on the flat torus with modulus
/// τ = τ₁ + iτ₂ and constant offset V₀. Construct through make_operator.
class OperatorSpec {
 public:
  double tau1() const noexcept { return tau1_; }
  double tau2() const noexcept { return tau2_; }
  double v0() const noexcept { return v0_; }
  /// |τ| = √(τ₁² + τ₂²)
  double modulus_abs() const noexcept;

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;

 private:
  friend OperatorSpec make_operator(double tau1, double tau2, double v0);
  OperatorSpec(double tau1, double tau2, double v0)
      : tau1_(tau1), tau2_(tau2), v0_(v0) {}

  double tau1_;
  double tau2_;
  double v0_;
};

/// Validates τ₂ > 0, V₀ > 0 and finiteness; throws DomainError otherwise.
OperatorSpec make_operator(double tau1, double tau2, double v0);

/// Lattice label of the eigenstate e^{2πi(mx + ny)}.
struct ModeIndex {
  std::int64_t m = 0;
  std::int64_t n = 0;
};

/// Symmetric 2×2 form with (n, m) Ω′ (n, m)ᵗ = |n - mτ|².
struct GramMatrix {
  double w11 = 0.0;
  double w12 = 0.0;
  double w22 = 0.0;

  double determinant() const noexcept { return w11 * w22 - w12 * w12; }
  GramMatrix scaled(double factor) const noexcept {
    return {w11 * factor, w12 * factor, w22 * factor};
  }
  /// vᵗ Ω′ v for v = (n, m).
  double apply(double n, double m) const noexcept {
    return w11 * n * n + 2.0 * w12 * n * m + w22 * m * m;
  }
};

/// Ω′ = [[1, -τ₁], [-τ₁, τ₁² + τ₂²]]
GramMatrix gram_matrix(const OperatorSpec& spec);

/// Ω = Ω′/τ₂, unit determinant.
GramMatrix normalized_gram_matrix(const OperatorSpec& spec);

/// A_{nm} = |n - mτ|², evaluated as (n - mτ₁)² + m²τ₂².
double quadratic_form(const OperatorSpec& spec, ModeIndex mode);

/// l_{mn} = (4π²/τ₂) A_{nm} + V₀
double eigenvalue(const OperatorSpec& spec, ModeIndex mode);

}  // namespace torusdet
