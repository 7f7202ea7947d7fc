#include "volterra/solution_checks.hpp"

#include <cmath>
#include <stdexcept>

#include "volterra/stats.hpp"

namespace volterra {

namespace {

void check_xi(const TestFunctional& xi, const SpectralSpace& space) {
  if (xi.xi0.size() != space.modes())
    throw std::invalid_argument("test functional has wrong mode count");
}

// ⟨u, ξ₀⟩ for a path column.
double column_dot(const SolutionPath& path, std::size_t n,
                  const std::vector<double>& xi0) {
  double acc = 0.0;
  for (std::size_t k = 0; k < path.modes(); ++k) acc += path.x[k][n] * xi0[k];
  return acc;
}

// Left-point quadrature of ∫₀^{t_n} a(t_n−τ) x_k(τ) dτ for every mode,
// with the exact kernel mass of each cell as the weight. Lumping the mass
// onto the left node keeps the rule first order even when a is singular.
std::vector<double> leftpoint_kernel_convolution(const SolutionPath& path,
                                                 const Kernel& kernel,
                                                 std::size_t n) {
  std::vector<double> out(path.modes(), 0.0);
  const double dt = path.grid.dt;
  for (std::size_t m = 0; m < n; ++m) {
    auto w = kernel.cell_moments(dt, n - 1 - m);
    double mass = w.left + w.right;
    for (std::size_t k = 0; k < path.modes(); ++k)
      out[k] += mass * path.x[k][m];
  }
  return out;
}

// Σ_{j<n} m_j (B ΔW_j)_k, the stochastic integral re-summed from increments.
std::vector<double> resummed_stochastic_integral(const SolutionPath& path,
                                                 const PsiProcess& psi,
                                                 const NoisePath& noise,
                                                 std::size_t n) {
  const auto& b = psi.operator_part();
  std::vector<double> acc(path.modes(), 0.0), dwj(path.modes());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < path.modes(); ++k) dwj[k] = noise.dw[k][j];
    auto y = b.apply(dwj);
    double m = path.psi_modulation[j];
    for (std::size_t k = 0; k < path.modes(); ++k) acc[k] += m * y[k];
  }
  return acc;
}

}  // namespace

double weak_residual(const SolutionPath& path, const TestFunctional& xi,
                     const Kernel& kernel, const SpectralSpace& space,
                     const PsiProcess& psi, const NoisePath& noise, double t) {
  check_xi(xi, space);
  if (!(path.grid == noise.grid))
    throw std::invalid_argument("path and noise use different grids");
  const std::size_t n = path.grid.index_of(t);

  double lhs = column_dot(path, n, xi.xi0);
  double init = column_dot(path, 0, xi.xi0);
  auto conv = leftpoint_kernel_convolution(path, kernel, n);
  double drift = 0.0;
  for (std::size_t k = 0; k < path.modes(); ++k)
    drift += conv[k] * space.mu[k] * xi.xi0[k];  // A* = A in the eigenbasis
  auto stoch = resummed_stochastic_integral(path, psi, noise, n);
  double noise_term = 0.0;
  for (std::size_t k = 0; k < path.modes(); ++k)
    noise_term += stoch[k] * xi.xi0[k];

  return std::abs(lhs - init - drift - noise_term);
}

double strong_residual(const SolutionPath& path, const Kernel& kernel,
                       const SpectralSpace& space, const PsiProcess& psi,
                       const NoisePath& noise, double t) {
  if (!(path.grid == noise.grid))
    throw std::invalid_argument("path and noise use different grids");
  const std::size_t n = path.grid.index_of(t);
  auto conv = leftpoint_kernel_convolution(path, kernel, n);
  auto stoch = resummed_stochastic_integral(path, psi, noise, n);
  std::vector<double> defect(path.modes());
  for (std::size_t k = 0; k < path.modes(); ++k)
    defect[k] = path.x[k][n] - space.mu[k] * conv[k] - stoch[k];
  return h_norm(defect);
}

double ito_representation_residual(const SolutionPath& path,
                                   const TestFunctional& xi,
                                   const Kernel& kernel,
                                   const SpectralSpace& space,
                                   const HilbertSchmidtOperator& b,
                                   const NoisePath& noise, double t) {
  check_xi(xi, space);
  if (!kernel.differentiable())
    throw std::logic_error("Ito-form check requires a kernel in W^{1,1}");
  if (!xi.phi.differentiable())
    throw std::logic_error("Ito-form check requires a C^1 time factor");
  const std::size_t n = path.grid.index_of(t);
  const double dt = path.grid.dt;
  const Kernel dker = kernel.derivative_kernel();
  const double a0 = kernel.at_zero();

  // (ȧ ⋆ x_k) on the grid, by product integration of the derivative kernel
  // (which may itself be weakly singular, e.g. fractional α ∈ (1,2)).
  std::vector<std::vector<double>> dconv(path.modes());
  for (std::size_t k = 0; k < path.modes(); ++k)
    dconv[k] = product_convolution(dker, path.x[k], path.grid);

  double t1 = column_dot(path, n, xi.xi0) * xi.phi.value(path.grid.time(n));
  double t2 = column_dot(path, 0, xi.xi0) * xi.phi.value(0.0);

  double t3 = 0.0, t5 = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    double tau = path.grid.time(m);
    double inner = 0.0, plain = 0.0;
    for (std::size_t k = 0; k < path.modes(); ++k) {
      inner += (dconv[k][m] + a0 * path.x[k][m]) * space.mu[k] * xi.xi0[k];
      plain += path.x[k][m] * xi.xi0[k];
    }
    t3 += dt * inner * xi.phi.value(tau);
    t5 += dt * plain * xi.phi.derivative(tau);
  }

  double t4 = 0.0;
  std::vector<double> dwj(path.modes());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < path.modes(); ++k) dwj[k] = noise.dw[k][j];
    auto y = b.apply(dwj);
    double dot = 0.0;
    for (std::size_t k = 0; k < path.modes(); ++k) dot += y[k] * xi.xi0[k];
    t4 += xi.phi.value(path.grid.time(j)) * dot;
  }

  return std::abs(t1 - t2 - t3 - t4 - t5);
}

double dirichlet_fubini_gap(const ResolventFamily& family,
                            const PsiProcess& psi, const NoisePath& noise,
                            double t) {
  if (!psi.deterministic())
    throw std::invalid_argument("fubini check supports deterministic psi only");
  const std::size_t n = family.grid.index_of(t);
  const std::size_t n_modes = family.modes();
  const auto& b = psi.operator_part();
  const double dt = family.grid.dt;

  std::vector<std::vector<double>> y(n, std::vector<double>());
  std::vector<double> dwj(n_modes);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n_modes; ++k) dwj[k] = noise.dw[k][j];
    y[j] = b.apply(dwj);
    double m = psi.modulation(family.grid.time(j), 0.0);
    for (double& v : y[j]) v *= m;
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < n_modes; ++k) {
    // time-first: Σ_m a(t−τ_m) Σ_{j<m} s(τ_m − t_j) y_j
    double order_a = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
      double a = family.kernel.eval(family.grid.time(n) - family.grid.time(m));
      double inner = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        inner += family.s[k][m - j] * y[j][k];
      order_a += dt * a * inner;
    }
    // noise-first: Σ_j y_j Σ_{m>j} a(t−τ_m) s(τ_m − t_j)
    double order_b = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double inner = 0.0;
      for (std::size_t m = j + 1; m < n; ++m)
        inner += family.kernel.eval(family.grid.time(n) - family.grid.time(m)) *
                 family.s[k][m - j];
      order_b += dt * inner * y[j][k];
    }
    worst = std::max(worst, std::abs(order_a - order_b));
  }
  return worst;
}

ChainReport check_solution_chain(const ChainConfig& config) {
  ChainReport report;
  report.n_paths = config.n_paths;

  auto family = build_family(config.kernel, config.space, config.grid);
  report.mode_identity_gap = resolvent_residual(family);

  const std::size_t n_modes = config.space.modes();
  std::vector<double> x0 = config.x0;
  if (x0.empty()) x0.assign(n_modes, 0.0);

  // shared deterministic test functional: equal weight on every mode
  TestFunctional xi;
  xi.xi0.assign(n_modes, 1.0 / std::sqrt(static_cast<double>(n_modes)));

  report.ito_applicable = config.kernel.differentiable() &&
                          config.psi.variant() == PsiProcess::Variant::ConstantB;
  if (!config.kernel.differentiable())
    report.ito_skip_reason = "kernel not differentiable";
  else if (config.psi.variant() != PsiProcess::Variant::ConstantB)
    report.ito_skip_reason = "psi is not a constant operator";
  TestFunctional xi_ito;
  xi_ito.xi0 = xi.xi0;
  xi_ito.phi = ScalarSignal::exponential(0.5);

  const double horizon = config.grid.horizon();
  std::vector<double> weak(config.n_paths), strong(config.n_paths),
      ito(config.n_paths, 0.0), sups(config.n_paths);

  parallel_chunks(
      config.n_paths, kDefaultChunk, config.n_threads,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
          auto noise = sample_path(config.space, config.grid, config.seed, p);
          auto conv = stochastic_convolution(family, config.psi, noise,
                                             ConvMethod::Direct);
          auto mild = mild_solution(family, x0, config.psi, noise,
                                    ConvMethod::Direct);
          weak[p] = weak_residual(mild, xi, config.kernel, config.space,
                                  config.psi, noise, horizon);
          strong[p] = strong_residual(conv, config.kernel, config.space,
                                      config.psi, noise, horizon);
          if (report.ito_applicable)
            ito[p] = ito_representation_residual(mild, xi_ito, config.kernel,
                                                 config.space,
                                                 config.psi.operator_part(),
                                                 noise, horizon);
          sups[p] = mild.sup_h_norm();
        }
      });

  // one shared-noise Fubini interchange check (path 0)
  {
    auto noise = sample_path(config.space, config.grid, config.seed, 0);
    if (config.psi.deterministic())
      report.fubini_gap = dirichlet_fubini_gap(family, config.psi, noise, horizon);
  }

  report.weak = std::move(weak);
  report.strong = std::move(strong);
  report.ito = std::move(ito);
  report.weak_median = median(report.weak);
  report.strong_median = median(report.strong);
  report.sup_norm_median = median(sups);
  report.tolerance = config.tol_factor * std::max(report.sup_norm_median, 1e-12);
  report.weak_pass = report.weak_median <= report.tolerance;
  report.strong_pass = report.strong_median <= report.tolerance;
  if (report.ito_applicable) {
    report.ito_median = median(report.ito);
    report.ito_pass = report.ito_median <= report.tolerance;
  } else {
    report.ito_pass = true;  // skipped with reason
  }
  report.pass = report.weak_pass && report.strong_pass && report.ito_pass;
  return report;
}

}  // namespace volterra
