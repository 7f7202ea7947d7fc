#include "volterra/process.hpp"

#include <cmath>

namespace volterra {

double ScalarSignal::value(double t) const {
  switch (kind) {
    case Kind::Constant:
      return scale;
    case Kind::SqrtT:
      return scale * std::sqrt(t);
    case Kind::Exponential:
      return scale * std::exp(rate * t);
  }
  return 0.0;
}

double ScalarSignal::derivative(double t) const {
  switch (kind) {
    case Kind::Constant:
      return 0.0;
    case Kind::SqrtT:
      throw std::logic_error("sqrt-t signal is not C^1 at t = 0");
    case Kind::Exponential:
      return rate * scale * std::exp(rate * t);
  }
  return 0.0;
}

double ScalarSignal::square_integral(double horizon) const {
  switch (kind) {
    case Kind::Constant:
      return scale * scale * horizon;
    case Kind::SqrtT:
      return scale * scale * 0.5 * horizon * horizon;
    case Kind::Exponential:
      if (rate == 0.0) return scale * scale * horizon;
      return scale * scale * (std::exp(2.0 * rate * horizon) - 1.0) /
             (2.0 * rate);
  }
  return 0.0;
}

PsiProcess PsiProcess::constant_b(HilbertSchmidtOperator b) {
  return PsiProcess(Variant::ConstantB, std::move(b));
}

PsiProcess PsiProcess::modulated(HilbertSchmidtOperator b, ScalarSignal phi) {
  PsiProcess p(Variant::DeterministicModulated, std::move(b));
  p.phi_ = phi;
  return p;
}

PsiProcess PsiProcess::adapted(HilbertSchmidtOperator b, double bound) {
  if (!(bound > 0.0))
    throw std::invalid_argument("adapted modulation requires bound > 0");
  PsiProcess p(Variant::AdaptedModulated, std::move(b));
  p.bound_ = bound;
  return p;
}

double PsiProcess::modulation(double t, double history_norm) const {
  switch (variant_) {
    case Variant::ConstantB:
      return 1.0;
    case Variant::DeterministicModulated:
      return phi_.value(t);
    case Variant::AdaptedModulated:
      return bound_ / (1.0 + history_norm * history_norm);
  }
  return 0.0;
}

double psi_norm_n2(const PsiProcess& psi, const SpectralSpace& space,
                   const TimeGrid& grid) {
  double base = hs_norm(psi.operator_part(), space);
  switch (psi.variant()) {
    case PsiProcess::Variant::ConstantB:
      return base * std::sqrt(grid.horizon());
    case PsiProcess::Variant::DeterministicModulated:
      return base *
             std::sqrt(psi.modulation_signal().square_integral(grid.horizon()));
    case PsiProcess::Variant::AdaptedModulated:
      throw std::logic_error(
          "adapted psi norm needs the Monte Carlo estimate (see estimates)");
  }
  return 0.0;
}

}  // namespace volterra
