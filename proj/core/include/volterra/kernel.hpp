#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace volterra {

/// Scalar memory kernel a(t) of the Volterra system, together with the
/// closed-form local moments needed by product-integration quadrature.
///
/// Variants:
///   Constant(c)          a(t) = c            (heat-type when c = 1)
///   Linear               a(t) = t            (wave-type)
///   FractionalPower(α)   a(t) = t^{α-1}/Γ(α), α ∈ (0,2)
///   Exponential(b)       a(t) = e^{-bt}, b > 0
///   Tabulated            piecewise-linear interpolation of sampled values
///
/// All variants are locally integrable; the fractional variant with α < 1 is
/// singular at t = 0 and may never be evaluated there pointwise. Quadrature
/// against it goes through exact cell moments instead.
class Kernel {
 public:
  enum class Type { Constant, Linear, FractionalPower, Exponential, Tabulated };

  static Kernel constant(double c);
  static Kernel linear();
  static Kernel fractional(double alpha);
  static Kernel exponential(double b);
  static Kernel tabulated(std::vector<double> times, std::vector<double> values);

  Type type() const { return type_; }
  /// Overall multiplier; 1 for user-constructed kernels, used by
  /// derivative_kernel() to represent e.g. d/dt e^{-bt} = -b e^{-bt}.
  double scale() const { return scale_; }
  double constant_value() const { return c_; }
  double alpha() const { return alpha_; }
  double decay_rate() const { return b_; }

  /// True when a(t) has an integrable classical derivative (a ∈ W^{1,1}):
  /// Constant, Linear, Exponential, and FractionalPower with α > 1.
  bool differentiable() const;
  /// Static per-variant flag standing in for the completely-positive /
  /// 3-monotone kernel classes; asserted by construction, not checked.
  bool completely_positive() const;
  bool singular_at_zero() const;

  /// Pointwise a(t). Throws std::domain_error for t < 0 and for t = 0 on
  /// singular variants, or t outside the table for Tabulated.
  double eval(double t) const;

  /// ȧ(t); throws std::logic_error unless differentiable().
  double derivative(double t) const;

  /// ȧ represented as a Kernel, so the derivative can be convolved with the
  /// same product-integration machinery. Throws unless differentiable().
  Kernel derivative_kernel() const;

  /// a(0); throws for singular variants.
  double at_zero() const;

  /// ∫₀^t a(τ) dτ in closed form (exact piecewise integration for Tabulated).
  double antiderivative(double t) const;

  /// Product-integration weights of a against the two linear hat functions
  /// on cell [m·Δt, (m+1)·Δt]:
  ///   left  = ∫ a(σ)·((m+1)Δt − σ)/Δt dσ   (hat that is 1 at the left node)
  ///   right = ∫ a(σ)·(σ − mΔt)/Δt dσ
  /// Computed in closed form per variant, so convolving a against a
  /// piecewise-linear function is exact for that function class.
  struct CellWeights {
    double left;
    double right;
  };
  std::vector<CellWeights> moments(double dt, std::size_t n_cells) const;
  CellWeights cell_moments(double dt, std::size_t cell) const;

  /// Closed-form scalar resolvent s(t) solving
  ///   s(t) = 1 + μ ∫₀^t a(t−τ) s(τ) dτ
  /// when one is known:
  ///   Constant(c)           e^{cμt}
  ///   Linear, μ < 0         cos(√(−μ)·t)
  ///   FractionalPower(α)    E_α(μ t^α)   (Mittag-Leffler)
  ///   any kernel, μ = 0     1
  /// Returns nullopt otherwise, or when the Mittag-Leffler evaluation would
  /// be numerically unreliable.
  std::optional<double> analytic_resolvent(double mu, double t) const;

 private:
  Kernel() = default;

  Type type_ = Type::Constant;
  double scale_ = 1.0;
  double c_ = 0.0;      // Constant
  double alpha_ = 0.0;  // FractionalPower
  double b_ = 0.0;      // Exponential
  std::vector<double> tab_t_, tab_v_;  // Tabulated

  // ∫₀^x a and ∫₀^x τ·a(τ)dτ for the base (unscaled) variant.
  double primitive0(double x) const;
  double primitive1(double x) const;
};

/// Mittag-Leffler function E_α(z) = Σ_{n≥0} z^n / Γ(αn + 1).
/// Power series plus, for α = 1/2, the identity E_{1/2}(z) = e^{z²} erfc(−z).
/// Returns nullopt when no reliable evaluation is available.
std::optional<double> mittag_leffler(double alpha, double z);

}  // namespace volterra
