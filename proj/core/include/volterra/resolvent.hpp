#pragma once

#include <cstddef>
#include <vector>

#include "volterra/kernel.hpp"
#include "volterra/spectral_space.hpp"
#include "volterra/time_grid.hpp"

namespace volterra {

/// Per-mode values s_k(t_n) of the resolvent family S(t) on a uniform grid.
/// Row k solves s(t) = 1 + μ_k ∫₀^t a(t-τ) s(τ) dτ; in the shared eigenbasis
/// S(t) acts diagonally as diag(s_1(t), …, s_N(t)).
struct ResolventFamily {
  TimeGrid grid;
  Kernel kernel;
  SpectralSpace space;
  /// s[k][n] ≈ s_k(t_n); s[k][0] = 1 exactly.
  std::vector<std::vector<double>> s;

  std::size_t modes() const { return s.size(); }
  double value(std::size_t mode, std::size_t n) const { return s[mode][n]; }
};

/// Product-integration solve of the scalar resolvent equation. The unknown is
/// interpolated piecewise-linearly and the kernel integrated exactly per cell,
/// so each step is a scalar linear solve (forward substitution in the Volterra
/// lower-triangular structure).
/// Throws std::runtime_error when 1 - μ·w₀ vanishes (message reports the step).
std::vector<double> solve_scalar_resolvent(const Kernel& kernel, double mu,
                                           const TimeGrid& grid);

ResolventFamily build_family(const Kernel& kernel, const SpectralSpace& space,
                             const TimeGrid& grid);

/// A-posteriori defect of the resolvent equation, re-evaluated with an
/// independent quadrature: the row is re-interpolated with a cubic onto a
/// 4x finer grid and convolved against the kernel there (exact cell moments
/// where the kernel is singular, trapezoid otherwise). Returns
/// max over modes and grid times of |s(t) - 1 - μ (a ⋆ s)(t)|.
double resolvent_residual(const ResolventFamily& family);
double scalar_resolvent_residual(const Kernel& kernel, double mu,
                                 const std::vector<double>& s,
                                 const TimeGrid& grid);

/// M_T = sup_{t≤T} ||S(t)|| = max_{k,n} |s_k(t_n)| for the diagonal family.
double sup_norm(const ResolventFamily& family);

/// Quadrature value of ∫₀^T Σ_k λ_k |S(τ)B e_k|²_H dτ, the admissibility
/// integral Tr ∫ S B Q B* S*; always finite in the truncation, reported for
/// scaling studies.
double admissibility_check(const ResolventFamily& family,
                           const HilbertSchmidtOperator& b);

/// Discrete convolution (a ⋆ s)(t_n) with the solver's own product-integration
/// weights. Exposed for the per-mode identity μ(a⋆s)(t) = s(t) - 1.
std::vector<double> product_convolution(const Kernel& kernel,
                                        const std::vector<double>& values,
                                        const TimeGrid& grid);

}  // namespace volterra
