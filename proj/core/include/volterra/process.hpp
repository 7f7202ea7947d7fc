#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "volterra/spectral_space.hpp"
#include "volterra/time_grid.hpp"

namespace volterra {

/// Small family of scalar time signals used for deterministic Ψ modulations
/// and for the C¹ factor φ in test functionals ξ(τ) = ξ₀ φ(τ).
struct ScalarSignal {
  enum class Kind { Constant, SqrtT, Exponential };

  Kind kind = Kind::Constant;
  double scale = 1.0;
  double rate = 0.0;  // Exponential: scale·e^{rate·t}

  static ScalarSignal one() { return {}; }
  static ScalarSignal constant(double c) { return {Kind::Constant, c, 0.0}; }
  static ScalarSignal sqrt_t(double c = 1.0) { return {Kind::SqrtT, c, 0.0}; }
  static ScalarSignal exponential(double rate, double c = 1.0) {
    return {Kind::Exponential, c, rate};
  }

  double value(double t) const;
  /// dφ/dt; throws for SqrtT (not C¹ at 0).
  double derivative(double t) const;
  bool differentiable() const { return kind != Kind::SqrtT; }
  /// ∫₀^T φ(t)² dt in closed form.
  double square_integral(double horizon) const;
};

/// Integrand process Ψ of the stochastic convolution. Every variant lies in
/// N²(0,T;L₂⁰):
///   ConstantB              Ψ(t) = B
///   DeterministicModulated Ψ(t) = φ(t)·B
///   AdaptedModulated       Ψ(t) = m(t, |W^Ψ(t)|_H)·B with |m| ≤ bound;
///                          m depends on the path history only up to t
///                          (left-point rule keeps it adapted).
class PsiProcess {
 public:
  enum class Variant { ConstantB, DeterministicModulated, AdaptedModulated };

  static PsiProcess constant_b(HilbertSchmidtOperator b);
  static PsiProcess modulated(HilbertSchmidtOperator b, ScalarSignal phi);
  /// Modulation bound·tanh(|W^Ψ(t)|_H); bounded by `bound` by construction.
  static PsiProcess adapted(HilbertSchmidtOperator b, double bound);

  Variant variant() const { return variant_; }
  bool deterministic() const { return variant_ != Variant::AdaptedModulated; }
  const HilbertSchmidtOperator& operator_part() const { return b_; }
  const ScalarSignal& modulation_signal() const { return phi_; }
  double bound() const { return bound_; }

  /// Scalar factor at (t, |history|_H). For deterministic variants the
  /// history argument is ignored.
  double modulation(double t, double history_norm) const;

 private:
  PsiProcess(Variant v, HilbertSchmidtOperator b)
      : variant_(v), b_(std::move(b)) {}
  Variant variant_;
  HilbertSchmidtOperator b_;
  ScalarSignal phi_ = ScalarSignal::one();
  double bound_ = 0.0;
};

/// ‖Ψ‖_T = {E ∫₀^T |Ψ(τ)|²_{L₂⁰} dτ}^{1/2}. Exact (no expectation needed)
/// for deterministic variants: hs_norm(B)·(∫ φ²)^{1/2}. Adapted variants need
/// the Monte Carlo overload in estimates.hpp.
double psi_norm_n2(const PsiProcess& psi, const SpectralSpace& space,
                   const TimeGrid& grid);

}  // namespace volterra
