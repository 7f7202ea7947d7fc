#include "volterra/resolvent.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace volterra {

namespace {

// Values of the piecewise-cubic (4-point Lagrange) interpolant of the row on
// a `refine`x finer grid. Falls back to linear interpolation on very short
// rows. Coarse nodes are reproduced exactly.
std::vector<double> refined_values(const std::vector<double>& s,
                                   std::size_t refine) {
  const std::size_t n = s.size() - 1;  // coarse cells
  std::vector<double> fine(n * refine + 1);
  fine.back() = s.back();
  if (n < 3) {
    for (std::size_t i = 0; i < n * refine; ++i) {
      std::size_t c = i / refine;
      double xi = static_cast<double>(i % refine) / refine;
      fine[i] = s[c] + xi * (s[c + 1] - s[c]);
    }
    return fine;
  }
  for (std::size_t i = 0; i < n * refine; ++i) {
    std::size_t c = i / refine;
    std::size_t base = c == 0 ? 0 : std::min(c - 1, n - 3);
    double x = static_cast<double>(c - base) +
               static_cast<double>(i % refine) / refine;
    // Lagrange cubic through s[base..base+3] at abscissae 0,1,2,3.
    double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
    double l1 = x * (x - 2) * (x - 3) / 2.0;
    double l2 = -x * (x - 1) * (x - 3) / 2.0;
    double l3 = x * (x - 1) * (x - 2) / 6.0;
    fine[i] = l0 * s[base] + l1 * s[base + 1] + l2 * s[base + 2] +
              l3 * s[base + 3];
  }
  return fine;
}

}  // namespace

std::vector<double> solve_scalar_resolvent(const Kernel& kernel, double mu,
                                           const TimeGrid& grid) {
  const std::size_t n = grid.n_steps;
  const auto w = kernel.moments(grid.dt, n);
  const double pivot = 1.0 - mu * w[0].left;
  if (std::abs(pivot) < 1e-14) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "singular resolvent step: 1 - mu*w0 = 0 at dt=%.17g; "
                  "retry with a different step size",
                  grid.dt);
    throw std::runtime_error(msg);
  }
  std::vector<double> s(n + 1);
  s[0] = 1.0;
  for (std::size_t step = 1; step <= n; ++step) {
    double known = 0.0;
    for (std::size_t m = 1; m < step; ++m) known += w[m].left * s[step - m];
    for (std::size_t m = 0; m < step; ++m) known += w[m].right * s[step - m - 1];
    s[step] = (1.0 + mu * known) / pivot;
  }
  return s;
}

ResolventFamily build_family(const Kernel& kernel, const SpectralSpace& space,
                             const TimeGrid& grid) {
  ResolventFamily family{grid, kernel, space, {}};
  family.s.reserve(space.modes());
  for (double mu : space.mu)
    family.s.push_back(solve_scalar_resolvent(kernel, mu, grid));
  return family;
}

std::vector<double> product_convolution(const Kernel& kernel,
                                        const std::vector<double>& values,
                                        const TimeGrid& grid) {
  if (values.size() != grid.n_points())
    throw std::invalid_argument("values/grid size mismatch");
  const std::size_t n = grid.n_steps;
  const auto w = kernel.moments(grid.dt, n);
  std::vector<double> conv(n + 1, 0.0);
  for (std::size_t step = 1; step <= n; ++step) {
    double acc = 0.0;
    for (std::size_t m = 0; m < step; ++m)
      acc += w[m].left * values[step - m] + w[m].right * values[step - m - 1];
    conv[step] = acc;
  }
  return conv;
}

double scalar_resolvent_residual(const Kernel& kernel, double mu,
                                 const std::vector<double>& s,
                                 const TimeGrid& grid) {
  constexpr std::size_t kRefine = 4;
  const std::size_t n = grid.n_steps;
  const double h = grid.dt / kRefine;
  const auto fine = refined_values(s, kRefine);
  const bool singular = kernel.singular_at_zero();

  // Kernel data on the fine grid, prepared once.
  std::vector<Kernel::CellWeights> wf;
  std::vector<double> af;
  if (singular) {
    wf = kernel.moments(h, n * kRefine);
  } else {
    af.resize(n * kRefine + 1);
    for (std::size_t m = 0; m <= n * kRefine; ++m) af[m] = kernel.eval(m * h);
  }

  double worst = 0.0;
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t nf = step * kRefine;
    double integral = 0.0;
    if (singular) {
      for (std::size_t m = 0; m < nf; ++m)
        integral += wf[m].left * fine[nf - m] + wf[m].right * fine[nf - m - 1];
    } else {
      integral = 0.5 * h * (af[0] * fine[nf] + af[nf] * fine[0]);
      for (std::size_t m = 1; m < nf; ++m) integral += h * af[m] * fine[nf - m];
    }
    double defect = std::abs(s[step] - 1.0 - mu * integral);
    worst = std::max(worst, defect);
  }
  return worst;
}

double resolvent_residual(const ResolventFamily& family) {
  double worst = 0.0;
  for (std::size_t k = 0; k < family.modes(); ++k)
    worst = std::max(worst,
                     scalar_resolvent_residual(family.kernel, family.space.mu[k],
                                               family.s[k], family.grid));
  return worst;
}

double sup_norm(const ResolventFamily& family) {
  double m = 0.0;
  for (const auto& row : family.s)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

double admissibility_check(const ResolventFamily& family,
                           const HilbertSchmidtOperator& b) {
  const auto& space = family.space;
  if (b.dim() != space.modes())
    throw std::invalid_argument("operator/space dimension mismatch");
  // Σ_k λ_k |S(τ)B e_k|² = Σ_i s_i(τ)² q_i with q_i = Σ_k λ_k B[i][k]².
  std::vector<double> q(space.modes(), 0.0);
  for (std::size_t i = 0; i < space.modes(); ++i)
    for (std::size_t k = 0; k < space.modes(); ++k)
      q[i] += space.lambda[k] * b(i, k) * b(i, k);

  const auto& grid = family.grid;
  double integral = 0.0;
  for (std::size_t n = 0; n <= grid.n_steps; ++n) {
    double val = 0.0;
    for (std::size_t i = 0; i < space.modes(); ++i) {
      double si = family.s[i][n];
      val += si * si * q[i];
    }
    double weight = (n == 0 || n == grid.n_steps) ? 0.5 : 1.0;
    integral += weight * grid.dt * val;
  }
  return integral;
}

}  // namespace volterra
