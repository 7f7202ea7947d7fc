#include "volterra/convolution.hpp"

#include <cmath>
#include <stdexcept>

#include "volterra/fft.hpp"

namespace volterra {

namespace {

void check_compatible(const ResolventFamily& family, const PsiProcess& psi,
                      const NoisePath& noise) {
  if (!(family.grid == noise.grid))
    throw std::invalid_argument("resolvent family and noise use different grids");
  if (family.modes() != noise.modes() ||
      psi.operator_part().dim() != family.modes())
    throw std::invalid_argument("mode-count mismatch between family, psi, noise");
}

// Σ_k λ_k B[i][k]², the per-row weight of |S·B|²_{L₂⁰} contributions.
std::vector<double> row_q_weights(const HilbertSchmidtOperator& b,
                                  const SpectralSpace& space) {
  std::vector<double> q(b.dim(), 0.0);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k)
      q[i] += space.lambda[k] * b(i, k) * b(i, k);
  return q;
}

}  // namespace

double SolutionPath::sup_h_norm() const {
  double worst = 0.0;
  for (std::size_t n = 0; n <= grid.n_steps; ++n) {
    double s = 0.0;
    for (const auto& row : x) s += row[n] * row[n];
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

SolutionPath stochastic_convolution(const ResolventFamily& family,
                                    const PsiProcess& psi,
                                    const NoisePath& noise, ConvMethod method) {
  check_compatible(family, psi, noise);
  const std::size_t n_modes = family.modes();
  const std::size_t n = family.grid.n_steps;
  const auto& b = psi.operator_part();

  SolutionPath path;
  path.grid = family.grid;
  path.provenance = SolutionPath::Provenance::Convolution;
  path.x.assign(n_modes, std::vector<double>(n + 1, 0.0));
  path.psi_modulation.assign(n, 0.0);

  if (method == ConvMethod::Auto)
    method = (psi.deterministic() && n >= 256) ? ConvMethod::Fft
                                               : ConvMethod::Direct;
  if (!psi.deterministic() && method == ConvMethod::Fft)
    throw std::invalid_argument("fft path requires a deterministic psi");

  if (method == ConvMethod::Fft) {
    // y_i[j] = m_j (B ΔW_j)_i; per mode x_i = (s_i * y_i) truncated to j < n.
    std::vector<std::vector<double>> y(n_modes, std::vector<double>(n, 0.0));
    std::vector<double> dwj(n_modes);
    for (std::size_t j = 0; j < n; ++j) {
      double m = psi.modulation(family.grid.time(j), 0.0);
      path.psi_modulation[j] = m;
      for (std::size_t k = 0; k < n_modes; ++k) dwj[k] = noise.dw[k][j];
      auto bw = b.apply(dwj);
      for (std::size_t i = 0; i < n_modes; ++i) y[i][j] = m * bw[i];
    }
    for (std::size_t i = 0; i < n_modes; ++i) {
      auto c = fft_convolve(family.s[i], y[i]);
      for (std::size_t k = 1; k <= n; ++k)
        path.x[i][k] = c[k] - (k < n ? y[i][k] : 0.0);  // drop the j = k term
    }
    return path;
  }

  // Direct triangular sum; for adapted Ψ the modulation at step j uses the
  // already-computed value W^Ψ(t_j).
  std::vector<double> dwj(n_modes), y(n_modes);
  for (std::size_t j = 0; j < n; ++j) {
    double hist = 0.0;
    if (!psi.deterministic()) {
      double s = 0.0;
      for (std::size_t k = 0; k < n_modes; ++k)
        s += path.x[k][j] * path.x[k][j];
      hist = std::sqrt(s);
    }
    double m = psi.modulation(family.grid.time(j), hist);
    path.psi_modulation[j] = m;
    for (std::size_t k = 0; k < n_modes; ++k) dwj[k] = noise.dw[k][j];
    y = b.apply(dwj);
    for (double& v : y) v *= m;
    // scatter the new increment into all later times
    for (std::size_t i = 0; i < n_modes; ++i) {
      const auto& srow = family.s[i];
      double yi = y[i];
      if (yi == 0.0) continue;
      auto& xrow = path.x[i];
      for (std::size_t k = j + 1; k <= n; ++k) xrow[k] += srow[k - j] * yi;
    }
  }
  return path;
}

SolutionPath mild_solution(const ResolventFamily& family,
                           const std::vector<double>& x0,
                           const PsiProcess& psi, const NoisePath& noise,
                           ConvMethod method) {
  if (x0.size() != family.modes())
    throw std::invalid_argument("initial value has wrong mode count");
  SolutionPath path = stochastic_convolution(family, psi, noise, method);
  path.provenance = SolutionPath::Provenance::Mild;
  const std::size_t n = family.grid.n_steps;
  for (std::size_t i = 0; i < family.modes(); ++i)
    for (std::size_t k = 0; k <= n; ++k)
      path.x[i][k] += family.s[i][k] * x0[i];

  // Left-point quadrature of ∫₀^T |S(T-τ)Ψ(τ)|²_{L₂⁰} dτ with the modulations
  // actually realized on this path.
  const auto q = row_q_weights(psi.operator_part(), family.space);
  double cond = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double m = path.psi_modulation[j];
    double val = 0.0;
    for (std::size_t i = 0; i < family.modes(); ++i) {
      double si = family.s[i][n - j];
      val += si * si * q[i];
    }
    cond += family.grid.dt * m * m * val;
  }
  path.mild_condition = cond;
  return path;
}

std::vector<std::vector<double>> covariance_quadrature(
    const ResolventFamily& family, const HilbertSchmidtOperator& b, double t) {
  const std::size_t n = family.grid.index_of(t);
  const std::size_t n_modes = family.modes();
  if (b.dim() != n_modes)
    throw std::invalid_argument("operator/family dimension mismatch");
  // (S(τ)BQB*S*(τ))_{ij} = s_i(τ) s_j(τ) G_{ij},  G = B diag(λ) B^T.
  std::vector<std::vector<double>> g(n_modes, std::vector<double>(n_modes, 0.0));
  for (std::size_t i = 0; i < n_modes; ++i)
    for (std::size_t j = 0; j < n_modes; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_modes; ++k)
        acc += family.space.lambda[k] * b(i, k) * b(j, k);
      g[i][j] = acc;
    }
  std::vector<std::vector<double>> cov(n_modes,
                                       std::vector<double>(n_modes, 0.0));
  for (std::size_t m = 0; m <= n; ++m) {
    double w = (m == 0 || m == n) ? 0.5 : 1.0;
    if (n == 0) break;
    for (std::size_t i = 0; i < n_modes; ++i)
      for (std::size_t j = 0; j < n_modes; ++j)
        cov[i][j] += w * family.grid.dt * family.s[i][m] * family.s[j][m] * g[i][j];
  }
  return cov;
}

std::vector<double> exact_gaussian_sample(const ResolventFamily& family,
                                          const HilbertSchmidtOperator& b,
                                          double t, std::uint64_t seed,
                                          std::uint64_t path_index) {
  if (!b.is_diagonal())
    throw std::invalid_argument("exact gaussian sampling needs a diagonal B");
  const std::size_t n = family.grid.index_of(t);
  std::vector<double> out(family.modes(), 0.0);
  for (std::size_t i = 0; i < family.modes(); ++i) {
    double integral = 0.0;
    for (std::size_t m = 0; m <= n; ++m) {
      double w = (m == 0 || m == n) ? 0.5 : 1.0;
      integral += w * family.grid.dt * family.s[i][m] * family.s[i][m];
    }
    if (n == 0) integral = 0.0;
    double bi = b.diagonal_entry(i);
    double var = family.space.lambda[i] * bi * bi * integral;
    if (var > 0.0)
      out[i] = std::sqrt(var) *
               rng::normal_at(seed, rng::kStreamExactGaussian, path_index, i, n);
  }
  return out;
}

double trajectory_l2(const SolutionPath& path) {
  double integral = 0.0;
  const std::size_t n = path.grid.n_steps;
  for (std::size_t m = 0; m <= n; ++m) {
    double s = 0.0;
    for (const auto& row : path.x) s += row[m] * row[m];
    double w = (m == 0 || m == n) ? 0.5 : 1.0;
    integral += w * path.grid.dt * s;
  }
  return integral;
}

}  // namespace volterra
