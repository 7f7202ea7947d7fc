#include "volterra/spectral_space.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace volterra {

SpectralSpace::SpectralSpace(std::vector<double> a_eigs,
                             std::vector<double> q_eigs)
    : mu(std::move(a_eigs)), lambda(std::move(q_eigs)) {
  if (mu.empty() || mu.size() != lambda.size())
    throw std::invalid_argument("space requires matching nonempty spectra");
  for (double l : lambda)
    if (l < 0.0)
      throw std::invalid_argument("covariance eigenvalues must be nonnegative");
}

SpectralSpace SpectralSpace::dirichlet_laplacian(std::size_t n_modes) {
  std::vector<double> mu(n_modes), lam(n_modes, 1.0);
  for (std::size_t k = 0; k < n_modes; ++k) {
    double kk = static_cast<double>(k + 1);
    mu[k] = -kk * kk;
  }
  return SpectralSpace(std::move(mu), std::move(lam));
}

double SpectralSpace::trace_q() const {
  return std::accumulate(lambda.begin(), lambda.end(), 0.0);
}

HilbertSchmidtOperator HilbertSchmidtOperator::zero(std::size_t n) {
  return HilbertSchmidtOperator(n, true);
}

HilbertSchmidtOperator HilbertSchmidtOperator::identity(std::size_t n) {
  HilbertSchmidtOperator op(n, true);
  for (std::size_t i = 0; i < n; ++i) op.entries_[i * n + i] = 1.0;
  return op;
}

HilbertSchmidtOperator HilbertSchmidtOperator::diagonal(
    std::vector<double> entries) {
  HilbertSchmidtOperator op(entries.size(), true);
  for (std::size_t i = 0; i < entries.size(); ++i)
    op.entries_[i * op.n_ + i] = entries[i];
  return op;
}

HilbertSchmidtOperator HilbertSchmidtOperator::dense(
    std::vector<std::vector<double>> rows) {
  std::size_t n = rows.size();
  bool diag = true;
  HilbertSchmidtOperator op(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw std::invalid_argument("operator matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      op.entries_[i * n + j] = rows[i][j];
      if (i != j && rows[i][j] != 0.0) diag = false;
    }
  }
  op.diagonal_ = diag;
  return op;
}

std::vector<double> HilbertSchmidtOperator::apply(
    std::span<const double> u) const {
  if (u.size() != n_)
    throw std::invalid_argument("operator/vector dimension mismatch");
  std::vector<double> out(n_, 0.0);
  if (diagonal_) {
    for (std::size_t i = 0; i < n_; ++i) out[i] = entries_[i * n_ + i] * u[i];
    return out;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    const double* row = entries_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) acc += row[j] * u[j];
    out[i] = acc;
  }
  return out;
}

HilbertSchmidtOperator HilbertSchmidtOperator::scaled(double factor) const {
  HilbertSchmidtOperator op = *this;
  for (double& e : op.entries_) e *= factor;
  return op;
}

double h_norm(std::span<const double> h) {
  double s = 0.0;
  for (double v : h) s += v * v;
  return std::sqrt(s);
}

double hs_norm(const HilbertSchmidtOperator& op, const SpectralSpace& space) {
  if (op.dim() != space.modes())
    throw std::invalid_argument("operator/space dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < op.dim(); ++j)
    for (std::size_t k = 0; k < op.dim(); ++k)
      s += space.lambda[k] * op(j, k) * op(j, k);
  return std::sqrt(s);
}

double graph_norm(std::span<const double> h, const SpectralSpace& space) {
  if (h.size() != space.modes())
    throw std::invalid_argument("vector/space dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k)
    s += h[k] * h[k] * (1.0 + space.mu[k] * space.mu[k]);
  return std::sqrt(s);
}

std::vector<double> apply_A(std::span<const double> h,
                            const SpectralSpace& space) {
  if (h.size() != space.modes())
    throw std::invalid_argument("vector/space dimension mismatch");
  std::vector<double> out(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) out[k] = space.mu[k] * h[k];
  return out;
}

}  // namespace volterra
