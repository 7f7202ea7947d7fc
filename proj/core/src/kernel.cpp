#include "volterra/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace volterra {

namespace {

double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys,
               double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t hi = std::min<std::size_t>(it - xs.begin(), xs.size() - 1);
  if (hi == 0) hi = 1;
  std::size_t lo = hi - 1;
  double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

// ∫_u^v f(σ)dσ by Simpson on each tabulated segment overlapping [u,v].
// Exact when f is a polynomial of degree ≤ 3 per segment, which covers
// piecewise-linear a(σ) times {1, σ}.
template <typename F>
double segment_integral(const std::vector<double>& breaks, double u, double v,
                        F f) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = std::max(u, breaks[i]);
    double b = std::min(v, breaks[i + 1]);
    if (b <= a) continue;
    double m = 0.5 * (a + b);
    total += (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
  }
  return total;
}

}  // namespace

Kernel Kernel::constant(double c) {
  Kernel k;
  k.type_ = Type::Constant;
  k.c_ = c;
  return k;
}

Kernel Kernel::linear() {
  Kernel k;
  k.type_ = Type::Linear;
  return k;
}

Kernel Kernel::fractional(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("fractional kernel requires alpha in (0,2)");
  Kernel k;
  k.type_ = Type::FractionalPower;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::exponential(double b) {
  if (!(b > 0.0))
    throw std::invalid_argument("exponential kernel requires b > 0");
  Kernel k;
  k.type_ = Type::Exponential;
  k.b_ = b;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size())
    throw std::invalid_argument("tabulated kernel needs >= 2 samples");
  if (times.front() != 0.0)
    throw std::invalid_argument("tabulated kernel must start at t = 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw std::invalid_argument("tabulated kernel grid must be increasing");
  Kernel k;
  k.type_ = Type::Tabulated;
  k.tab_t_ = std::move(times);
  k.tab_v_ = std::move(values);
  return k;
}

bool Kernel::differentiable() const {
  switch (type_) {
    case Type::Constant:
    case Type::Linear:
    case Type::Exponential:
      return true;
    case Type::FractionalPower:
      return alpha_ > 1.0;
    case Type::Tabulated:
      return false;
  }
  return false;
}

bool Kernel::completely_positive() const {
  switch (type_) {
    case Type::Constant:
      return c_ * scale_ > 0.0;
    case Type::Exponential:
      return scale_ > 0.0;
    case Type::FractionalPower:
      return alpha_ <= 1.0 && scale_ > 0.0;
    default:
      return false;
  }
}

bool Kernel::singular_at_zero() const {
  return type_ == Type::FractionalPower && alpha_ < 1.0;
}

double Kernel::eval(double t) const {
  if (t < 0.0) throw std::domain_error("kernel evaluated at negative time");
  switch (type_) {
    case Type::Constant:
      return scale_ * c_;
    case Type::Linear:
      return scale_ * t;
    case Type::FractionalPower:
      if (t == 0.0 && alpha_ < 1.0)
        throw std::domain_error("singular kernel evaluated at t = 0");
      return scale_ * std::pow(t, alpha_ - 1.0) / std::tgamma(alpha_);
    case Type::Exponential:
      return scale_ * std::exp(-b_ * t);
    case Type::Tabulated:
      if (t > tab_t_.back())
        throw std::domain_error("tabulated kernel evaluated beyond its grid");
      return scale_ * lerp_at(tab_t_, tab_v_, t);
  }
  return 0.0;
}

double Kernel::derivative(double t) const {
  if (!differentiable())
    throw std::logic_error("kernel derivative requested for a variant not in W^{1,1}");
  if (t < 0.0) throw std::domain_error("kernel derivative at negative time");
  switch (type_) {
    case Type::Constant:
      return 0.0;
    case Type::Linear:
      return scale_;
    case Type::Exponential:
      return -b_ * scale_ * std::exp(-b_ * t);
    case Type::FractionalPower:
      if (t == 0.0)
        throw std::domain_error("fractional kernel derivative singular at t = 0");
      return scale_ * std::pow(t, alpha_ - 2.0) / std::tgamma(alpha_ - 1.0);
    default:
      break;
  }
  return 0.0;
}

Kernel Kernel::derivative_kernel() const {
  if (!differentiable())
    throw std::logic_error("derivative kernel requested for a variant not in W^{1,1}");
  Kernel d;
  switch (type_) {
    case Type::Constant:
      d = constant(0.0);
      break;
    case Type::Linear:
      d = constant(1.0);
      d.scale_ = scale_;
      return d;
    case Type::Exponential:
      d = exponential(b_);
      d.scale_ = -b_ * scale_;
      return d;
    case Type::FractionalPower:
      // d/dt t^{α-1}/Γ(α) = t^{α-2}/Γ(α-1)
      d = fractional(alpha_ - 1.0);
      d.scale_ = scale_;
      return d;
    default:
      break;
  }
  return d;
}

double Kernel::at_zero() const {
  switch (type_) {
    case Type::Constant:
      return scale_ * c_;
    case Type::Linear:
      return 0.0;
    case Type::Exponential:
      return scale_;
    case Type::FractionalPower:
      if (alpha_ < 1.0)
        throw std::domain_error("singular kernel has no value at t = 0");
      if (alpha_ == 1.0) return scale_;
      return 0.0;
    case Type::Tabulated:
      return scale_ * tab_v_.front();
  }
  return 0.0;
}

double Kernel::primitive0(double x) const {
  switch (type_) {
    case Type::Constant:
      return c_ * x;
    case Type::Linear:
      return 0.5 * x * x;
    case Type::FractionalPower:
      return std::pow(x, alpha_) / std::tgamma(alpha_ + 1.0);
    case Type::Exponential:
      return (1.0 - std::exp(-b_ * x)) / b_;
    case Type::Tabulated:
      if (x > tab_t_.back())
        throw std::domain_error("tabulated kernel integrated beyond its grid");
      return segment_integral(tab_t_, 0.0, x,
                              [this](double s) { return lerp_at(tab_t_, tab_v_, s); });
  }
  return 0.0;
}

double Kernel::primitive1(double x) const {
  switch (type_) {
    case Type::Constant:
      return 0.5 * c_ * x * x;
    case Type::Linear:
      return x * x * x / 3.0;
    case Type::FractionalPower:
      return std::pow(x, alpha_ + 1.0) / ((alpha_ + 1.0) * std::tgamma(alpha_));
    case Type::Exponential:
      return (1.0 - std::exp(-b_ * x) * (1.0 + b_ * x)) / (b_ * b_);
    case Type::Tabulated:
      if (x > tab_t_.back())
        throw std::domain_error("tabulated kernel integrated beyond its grid");
      return segment_integral(tab_t_, 0.0, x, [this](double s) {
        return s * lerp_at(tab_t_, tab_v_, s);
      });
  }
  return 0.0;
}

double Kernel::antiderivative(double t) const {
  if (t < 0.0) throw std::domain_error("kernel antiderivative at negative time");
  return scale_ * primitive0(t);
}

Kernel::CellWeights Kernel::cell_moments(double dt, std::size_t cell) const {
  double u = cell * dt;
  double v = u + dt;
  double m0 = primitive0(v) - primitive0(u);
  double m1 = (primitive1(v) - primitive1(u)) - u * m0;  // ∫ (σ-u) a(σ) dσ
  CellWeights w;
  w.right = scale_ * m1 / dt;
  w.left = scale_ * m0 - w.right;
  return w;
}

std::vector<Kernel::CellWeights> Kernel::moments(double dt,
                                                 std::size_t n_cells) const {
  if (!(dt > 0.0)) throw std::invalid_argument("moments require dt > 0");
  if (n_cells == 0) throw std::invalid_argument("moments require n_cells >= 1");
  std::vector<CellWeights> out(n_cells);
  for (std::size_t m = 0; m < n_cells; ++m) out[m] = cell_moments(dt, m);
  return out;
}

std::optional<double> Kernel::analytic_resolvent(double mu, double t) const {
  if (t < 0.0) throw std::domain_error("resolvent requested at negative time");
  if (mu == 0.0) return 1.0;
  switch (type_) {
    case Type::Constant:
      return std::exp(scale_ * c_ * mu * t);
    case Type::Linear: {
      double m = scale_ * mu;
      if (m < 0.0) return std::cos(std::sqrt(-m) * t);
      return std::nullopt;
    }
    case Type::FractionalPower:
      return mittag_leffler(alpha_, scale_ * mu * std::pow(t, alpha_));
    default:
      return std::nullopt;
  }
}

std::optional<double> mittag_leffler(double alpha, double z) {
  if (!(alpha > 0.0)) return std::nullopt;
  if (std::abs(alpha - 1.0) < 1e-14) return std::exp(z);
  if (std::abs(alpha - 0.5) < 1e-14) {
    // E_{1/2}(z) = e^{z²} erfc(-z)
    if (z * z > 700.0) return std::nullopt;
    return std::exp(z * z) * std::erfc(-z);
  }
  // Power series; bail out when intermediate terms grow enough to destroy
  // the result through cancellation.
  double sum = 1.0;
  double max_abs = 1.0;
  double lz = std::log(std::abs(z));
  int sign_z = z < 0.0 ? -1 : 1;
  int sign = 1;
  for (int n = 1; n <= 500; ++n) {
    sign *= sign_z;
    double log_term = n * lz - std::lgamma(alpha * n + 1.0);
    if (log_term > 60.0) return std::nullopt;  // cancellation beyond recovery
    double term = sign * std::exp(log_term);
    sum += term;
    max_abs = std::max(max_abs, std::abs(term));
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && n > 4) {
      if (max_abs > 1e13 * std::max(std::abs(sum), 1e-300)) return std::nullopt;
      return sum;
    }
  }
  return std::nullopt;
}

}  // namespace volterra
