#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "volterra/noise.hpp"
#include "volterra/process.hpp"
#include "volterra/resolvent.hpp"

namespace volterra {

/// H-valued trajectory in mode coefficients: x[k][n] ≈ ⟨X(t_n), e_k⟩.
struct SolutionPath {
  enum class Provenance { Convolution, Mild, ExactGaussian };

  TimeGrid grid;
  std::vector<std::vector<double>> x;  // [mode][grid point]
  Provenance provenance = Provenance::Convolution;
  /// Scalar Ψ factor actually used at each step (reconstructible for
  /// deterministic variants, path-dependent for adapted ones).
  std::vector<double> psi_modulation;
  /// Quadrature value of E ∫₀^T |S(T-τ)Ψ(τ)|²_{L₂⁰} dτ, recorded for mild
  /// solutions (the integrability condition of the mild-solution notion).
  std::optional<double> mild_condition;

  std::size_t modes() const { return x.size(); }
  std::vector<double> at(std::size_t n) const {
    std::vector<double> v(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) v[k] = x[k][n];
    return v;
  }
  double sup_h_norm() const;
};

enum class ConvMethod { Auto, Direct, Fft };

/// Discrete stochastic convolution W^Ψ(t_n) = Σ_{j<n} S(t_n−t_j)·Ψ(t_j)·ΔW_j
/// (left-point Itô rule; W^Ψ(0) = 0). S(t_n−t_j) is recomputed from the
/// stored resolvent rows — there is no semigroup shortcut. The FFT method is
/// an optimization for deterministic Ψ and must agree with the direct sum to
/// 1e-10; Auto picks it for long deterministic runs.
SolutionPath stochastic_convolution(const ResolventFamily& family,
                                    const PsiProcess& psi,
                                    const NoisePath& noise,
                                    ConvMethod method = ConvMethod::Auto);

/// Mild solution X(t_n) = S(t_n)X₀ + W^Ψ(t_n); records the integrability
/// condition value on the returned path.
SolutionPath mild_solution(const ResolventFamily& family,
                           const std::vector<double>& x0,
                           const PsiProcess& psi, const NoisePath& noise,
                           ConvMethod method = ConvMethod::Auto);

/// Trapezoid quadrature of Cov W^B(t) = ∫₀^t S(τ)BQB*S*(τ) dτ.
std::vector<std::vector<double>> covariance_quadrature(
    const ResolventFamily& family, const HilbertSchmidtOperator& b, double t);

/// Exact sampler from the Gaussian law of W^B(t) in the diagonal case:
/// independent N(0, λ_k b_k² ∫₀^t s_k(τ)²dτ) coordinates.
/// Throws std::invalid_argument for non-diagonal B.
std::vector<double> exact_gaussian_sample(const ResolventFamily& family,
                                          const HilbertSchmidtOperator& b,
                                          double t, std::uint64_t seed,
                                          std::uint64_t path_index);

/// Trapezoid value of ∫₀^T |x(t)|²_H dt for one path.
double trajectory_l2(const SolutionPath& path);

}  // namespace volterra
