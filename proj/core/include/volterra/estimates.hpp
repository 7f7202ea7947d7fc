#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "volterra/convolution.hpp"
#include "volterra/stats.hpp"

namespace volterra {

/// Monte Carlo report for the first-moment estimate
///   sup_{t≤T} E|W^Ψ(t)|_H ≤ C·M_T·{E ∫₀^T |Ψ|²_{L₂⁰} dt}^{1/2}.
struct MomentBoundReport {
  std::size_t n_paths = 0;
  std::vector<double> t;
  std::vector<double> mean_norm;  // E|W^Ψ(t_n)|_H estimates
  std::vector<double> se;
  double sup_estimate = 0.0;  // max over the grid
  double sup_se = 0.0;
  std::size_t sup_index = 0;
  double m_t = 0.0;       // computed resolvent sup norm
  double psi_norm = 0.0;  // ‖Ψ‖_T (exact for deterministic Ψ, MC otherwise)
  double c_input = 0.0;
  double rhs = 0.0;             // C·M_T·‖Ψ‖_T
  double observed_ratio = 0.0;  // sup_estimate / (M_T·‖Ψ‖_T)

  bool inequality_holds() const { return sup_estimate <= rhs; }
  bool ratio_within(double cap) const { return observed_ratio <= cap; }
};

MomentBoundReport moment_bound_check(const ResolventFamily& family,
                                     const PsiProcess& psi,
                                     std::size_t n_paths, std::uint64_t seed,
                                     double c, std::size_t n_threads = 1);

/// One row of the tail-bound table
///   P(|W^Ψ(t)|_H > a) ≤ b/a² + P(∫₀^t |Ψ|²_{L₂⁰} dτ > b/C²),  C = M_T.
struct TailBoundRecord {
  double a = 0.0, b = 0.0, t = 0.0;
  std::size_t n_paths = 0, exceed_count = 0;
  double p_hat = 0.0;
  double wilson_upper = 0.0;  // z = 3 score interval
  double chebyshev_term = 0.0;
  double psi_tail_term = 0.0;  // indicator for deterministic Ψ
  double rhs = 0.0;
  bool nontrivial = false;  // rhs ≤ 1
  bool holds = false;       // wilson_upper ≤ rhs (always true when trivial)
};

TailBoundRecord tail_bound_check(const ResolventFamily& family,
                                 const PsiProcess& psi, double a, double b,
                                 std::size_t n_paths, std::uint64_t seed,
                                 double t, std::size_t n_threads = 1);

/// Evaluates a whole (a, b) grid from one Monte Carlo pass (the path samples
/// are shared across rows, which is what makes grids affordable).
std::vector<TailBoundRecord> tail_bound_table(
    const ResolventFamily& family, const PsiProcess& psi,
    const std::vector<std::pair<double, double>>& ab_pairs,
    std::size_t n_paths, std::uint64_t seed, double t,
    std::size_t n_threads = 1);

/// Square-integrable-trajectory bound:
///   E ∫₀^T |W^Ψ(t)|² dt ≤ M_T² ∫₀^T ∫₀^t E|Ψ(τ)|²_{L₂⁰} dτ dt.
struct SquareTrajectoryRecord {
  std::size_t n_paths = 0;
  double estimate = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool holds = false;  // estimate ≤ bound + 3·se
};

SquareTrajectoryRecord square_trajectory_check(const ResolventFamily& family,
                                               const PsiProcess& psi,
                                               std::size_t n_paths,
                                               std::uint64_t seed,
                                               std::size_t n_threads = 1);

/// Monte Carlo ‖Ψ‖_T for adapted integrands (deterministic ones short-circuit
/// to the exact value).
double psi_norm_n2_mc(const ResolventFamily& family, const PsiProcess& psi,
                      std::size_t n_paths, std::uint64_t seed,
                      std::size_t n_threads = 1);

}  // namespace volterra
