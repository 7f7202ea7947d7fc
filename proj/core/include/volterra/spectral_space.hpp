#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace volterra {

/// Truncated eigen-representation of the state space H, the operator A and
/// the noise covariance Q. A and Q share the eigenbasis {e_k}; A has real
/// eigenvalues μ_k, Q has nonnegative eigenvalues λ_k. The default spectrum
/// is the Dirichlet Laplacian μ_k = -k² with λ_k = 1 (truncated cylindrical
/// noise, so Tr Q = N grows with the truncation).
struct SpectralSpace {
  std::vector<double> mu;
  std::vector<double> lambda;

  SpectralSpace() = default;
  SpectralSpace(std::vector<double> a_eigs, std::vector<double> q_eigs);

  static SpectralSpace dirichlet_laplacian(std::size_t n_modes);

  std::size_t modes() const { return mu.size(); }
  double trace_q() const;
};

/// Dense N×N matrix representing a Hilbert-Schmidt operator from
/// U₀-coordinates into H-coordinates. The diagonal flag enables exact
/// per-mode Gaussian sampling paths.
class HilbertSchmidtOperator {
 public:
  static HilbertSchmidtOperator zero(std::size_t n);
  static HilbertSchmidtOperator identity(std::size_t n);
  static HilbertSchmidtOperator diagonal(std::vector<double> entries);
  static HilbertSchmidtOperator dense(std::vector<std::vector<double>> rows);

  std::size_t dim() const { return n_; }
  bool is_diagonal() const { return diagonal_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }
  double diagonal_entry(std::size_t i) const { return entries_[i * n_ + i]; }

  /// B·u in coordinates.
  std::vector<double> apply(std::span<const double> u) const;

  HilbertSchmidtOperator scaled(double factor) const;

 private:
  HilbertSchmidtOperator(std::size_t n, bool diag)
      : n_(n), diagonal_(diag), entries_(n * n, 0.0) {}
  std::size_t n_ = 0;
  bool diagonal_ = false;
  std::vector<double> entries_;
};

/// |h|_H = (Σ h_k²)^{1/2}.
double h_norm(std::span<const double> h);

/// L₂⁰ norm: (Σ_{j,k} λ_k B[j][k]²)^{1/2}, i.e. Tr[(BQ^{1/2})(BQ^{1/2})*]^{1/2}.
double hs_norm(const HilbertSchmidtOperator& op, const SpectralSpace& space);

/// Graph norm (|h|² + |Ah|²)^{1/2} = (Σ h_k²(1 + μ_k²))^{1/2}.
double graph_norm(std::span<const double> h, const SpectralSpace& space);

/// (μ_k h_k)_k.
std::vector<double> apply_A(std::span<const double> h, const SpectralSpace& space);

}  // namespace volterra
