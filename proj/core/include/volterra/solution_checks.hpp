#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "volterra/convolution.hpp"

namespace volterra {

/// Test element ξ(τ) = ξ₀·φ(τ) with ξ₀ ∈ D(A*) (a mode-coefficient vector in
/// the truncation) and φ ∈ C¹[0,T] where the Itô-form check needs it.
struct TestFunctional {
  std::vector<double> xi0;
  ScalarSignal phi = ScalarSignal::one();

  bool constant_in_time() const {
    return phi.kind == ScalarSignal::Kind::Constant && phi.scale == 1.0;
  }
};

/// Defect of the weak-solution identity at grid time t:
///   ⟨x(t),ξ⟩ − ⟨X₀,ξ⟩ − ⟨∫₀^t a(t−τ)x(τ)dτ, A*ξ⟩ − ⟨∫₀^t Ψ dW, ξ⟩.
/// The deterministic convolution uses a left-point rectangle rule and the
/// stochastic term is re-summed from the raw increments, so the quadrature
/// errors are committed independently of the path construction; the defect
/// vanishes only in the Δt → 0 limit.
double weak_residual(const SolutionPath& path, const TestFunctional& xi,
                     const Kernel& kernel, const SpectralSpace& space,
                     const PsiProcess& psi, const NoisePath& noise, double t);

/// H-norm of the defect of the strong (pathwise) identity for the truncated
/// (hence bounded) A: W^Ψ(t) − ∫₀^t a(t−τ)AW^Ψ(τ)dτ − ∫₀^t ΨdW.
double strong_residual(const SolutionPath& path, const Kernel& kernel,
                       const SpectralSpace& space, const PsiProcess& psi,
                       const NoisePath& noise, double t);

/// Defect of the Itô-type representation for Ψ ≡ B and a ∈ W^{1,1}:
///   ⟨x(t),ξ(t)⟩ − ⟨X₀,ξ(0)⟩ − ∫₀^t ⟨(ȧ⋆x)(τ)+a(0)x(τ), A*ξ(τ)⟩dτ
///   − ∫₀^t ⟨ξ(τ), B dW(τ)⟩ − ∫₀^t ⟨x(τ), ξ̇(τ)⟩dτ.
/// With φ ≡ 1 this reduces algebraically to the weak identity and the two
/// residuals coincide exactly.
double ito_representation_residual(const SolutionPath& path,
                                   const TestFunctional& xi,
                                   const Kernel& kernel,
                                   const SpectralSpace& space,
                                   const HilbertSchmidtOperator& b,
                                   const NoisePath& noise, double t);

/// Largest order-swap discrepancy, over modes, of the double sum behind the
/// Dirichlet/Fubini interchange in the mild↔weak argument. Finite sums
/// commute, so this is rounding noise; it validates that the discretization
/// mirrors the interchange faithfully.
double dirichlet_fubini_gap(const ResolventFamily& family,
                            const PsiProcess& psi, const NoisePath& noise,
                            double t);

struct ChainConfig {
  Kernel kernel = Kernel::constant(1.0);
  SpectralSpace space;
  TimeGrid grid;
  PsiProcess psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  std::vector<double> x0;
  std::uint64_t seed = 42;
  std::size_t n_paths = 100;
  /// Residual tolerance as a fraction of the median path sup norm.
  double tol_factor = 5e-2;
  std::size_t n_threads = 1;
};

struct ChainReport {
  std::size_t n_paths = 0;
  std::vector<double> weak, strong, ito;  // per-path residuals
  double weak_median = 0.0, strong_median = 0.0, ito_median = 0.0;
  double sup_norm_median = 0.0;
  double tolerance = 0.0;
  bool ito_applicable = false;
  std::string ito_skip_reason;
  double mode_identity_gap = 0.0;  // max |μ(a⋆s)(t) − (s(t)−1)|
  double fubini_gap = 0.0;
  bool weak_pass = false, strong_pass = false, ito_pass = false;
  bool pass = false;
};

/// Runs strong, weak and Itô residuals on shared noise paths and summarizes
/// the solution-notion chain (strong ⇒ weak ⇒ mild consistency).
ChainReport check_solution_chain(const ChainConfig& config);

}  // namespace volterra
