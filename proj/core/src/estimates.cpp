#include "volterra/estimates.hpp"

#include <cmath>
#include <stdexcept>

namespace volterra {

namespace {

double hs_norm_sq(const PsiProcess& psi, const SpectralSpace& space) {
  double h = hs_norm(psi.operator_part(), space);
  return h * h;
}

// ∫₀^t |Ψ(τ)|²_{L₂⁰} dτ for deterministic Ψ, in closed form.
double deterministic_psi_square(const PsiProcess& psi,
                                const SpectralSpace& space, double t) {
  double base = hs_norm_sq(psi, space);
  switch (psi.variant()) {
    case PsiProcess::Variant::ConstantB:
      return base * t;
    case PsiProcess::Variant::DeterministicModulated:
      return base * psi.modulation_signal().square_integral(t);
    default:
      throw std::logic_error("deterministic psi expected");
  }
}

// ∫₀^T ∫₀^t φ(τ)² dτ dt in closed form.
double double_square_integral(const ScalarSignal& phi, double horizon) {
  double c2 = phi.scale * phi.scale;
  switch (phi.kind) {
    case ScalarSignal::Kind::Constant:
      return c2 * 0.5 * horizon * horizon;
    case ScalarSignal::Kind::SqrtT:
      return c2 * horizon * horizon * horizon / 6.0;
    case ScalarSignal::Kind::Exponential: {
      double r = phi.rate;
      if (r == 0.0) return c2 * 0.5 * horizon * horizon;
      return c2 * ((std::exp(2.0 * r * horizon) - 1.0) / (4.0 * r * r) -
                   horizon / (2.0 * r));
    }
  }
  return 0.0;
}

// W^Ψ(t_n) only, for deterministic Ψ: Σ_{j<n} S(t_n-t_j)·m_j·B ΔW_j.
std::vector<double> terminal_value(const ResolventFamily& family,
                                   const PsiProcess& psi,
                                   const NoisePath& noise, std::size_t n) {
  const std::size_t n_modes = family.modes();
  const auto& b = psi.operator_part();
  std::vector<double> out(n_modes, 0.0), dwj(n_modes);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n_modes; ++k) dwj[k] = noise.dw[k][j];
    auto y = b.apply(dwj);
    double m = psi.modulation(family.grid.time(j), 0.0);
    for (std::size_t i = 0; i < n_modes; ++i)
      out[i] += family.s[i][n - j] * m * y[i];
  }
  return out;
}

}  // namespace

double psi_norm_n2_mc(const ResolventFamily& family, const PsiProcess& psi,
                      std::size_t n_paths, std::uint64_t seed,
                      std::size_t n_threads) {
  if (psi.deterministic()) return psi_norm_n2(psi, family.space, family.grid);
  const double base = hs_norm_sq(psi, family.space);
  const std::size_t n_chunks =
      (n_paths + kDefaultChunk - 1) / kDefaultChunk;
  std::vector<double> chunk_sums(n_chunks, 0.0);
  parallel_chunks(n_paths, kDefaultChunk, n_threads,
                  [&](std::size_t c, std::size_t begin, std::size_t end) {
                    double acc = 0.0;
                    for (std::size_t p = begin; p < end; ++p) {
                      auto noise =
                          sample_path(family.space, family.grid, seed, p);
                      auto path = stochastic_convolution(family, psi, noise,
                                                         ConvMethod::Direct);
                      double integral = 0.0;
                      for (double m : path.psi_modulation)
                        integral += family.grid.dt * m * m;
                      acc += base * integral;
                    }
                    chunk_sums[c] = acc;
                  });
  double total = 0.0;
  for (double v : chunk_sums) total += v;
  return std::sqrt(total / static_cast<double>(n_paths));
}

MomentBoundReport moment_bound_check(const ResolventFamily& family,
                                     const PsiProcess& psi,
                                     std::size_t n_paths, std::uint64_t seed,
                                     double c, std::size_t n_threads) {
  if (n_paths < 100)
    throw std::invalid_argument("moment bound report needs n_paths >= 100");
  const std::size_t n_times = family.grid.n_points();
  const std::size_t n_chunks =
      (n_paths + kDefaultChunk - 1) / kDefaultChunk;

  std::vector<std::vector<MomentAccumulator>> per_chunk(
      n_chunks, std::vector<MomentAccumulator>(n_times));
  parallel_chunks(
      n_paths, kDefaultChunk, n_threads,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& acc = per_chunk[chunk];
        for (std::size_t p = begin; p < end; ++p) {
          auto noise = sample_path(family.space, family.grid, seed, p);
          auto path = stochastic_convolution(family, psi, noise);
          for (std::size_t nidx = 0; nidx < n_times; ++nidx) {
            double s = 0.0;
            for (std::size_t k = 0; k < path.modes(); ++k)
              s += path.x[k][nidx] * path.x[k][nidx];
            acc[nidx].add(std::sqrt(s));
          }
        }
      });

  MomentBoundReport report;
  report.n_paths = n_paths;
  report.c_input = c;
  report.t.resize(n_times);
  report.mean_norm.resize(n_times);
  report.se.resize(n_times);
  for (std::size_t nidx = 0; nidx < n_times; ++nidx) {
    MomentAccumulator total;
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
      total.merge(per_chunk[chunk][nidx]);
    report.t[nidx] = family.grid.time(nidx);
    report.mean_norm[nidx] = total.mean();
    report.se[nidx] = total.standard_error();
    if (report.mean_norm[nidx] >= report.sup_estimate) {
      report.sup_estimate = report.mean_norm[nidx];
      report.sup_se = report.se[nidx];
      report.sup_index = nidx;
    }
  }

  report.m_t = sup_norm(family);
  report.psi_norm = psi.deterministic()
                        ? psi_norm_n2(psi, family.space, family.grid)
                        : psi_norm_n2_mc(family, psi, n_paths, seed + 1,
                                         n_threads);
  report.rhs = c * report.m_t * report.psi_norm;
  double scale = report.m_t * report.psi_norm;
  report.observed_ratio = scale > 0.0 ? report.sup_estimate / scale : 0.0;
  return report;
}

std::vector<TailBoundRecord> tail_bound_table(
    const ResolventFamily& family, const PsiProcess& psi,
    const std::vector<std::pair<double, double>>& ab_pairs,
    std::size_t n_paths, std::uint64_t seed, double t,
    std::size_t n_threads) {
  for (auto [a, b] : ab_pairs)
    if (!(a > 0.0) || !(b > 0.0))
      throw std::invalid_argument("tail bound requires a > 0 and b > 0");
  const std::size_t n = family.grid.index_of(t);
  const double m_t = sup_norm(family);
  const std::size_t n_pairs = ab_pairs.size();
  const std::size_t n_chunks =
      (n_paths + kDefaultChunk - 1) / kDefaultChunk;

  // per chunk: exceedance count per pair, then psi-integral exceedances
  std::vector<std::vector<std::size_t>> counts(
      n_chunks, std::vector<std::size_t>(2 * n_pairs, 0));
  parallel_chunks(
      n_paths, kDefaultChunk, n_threads,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& c = counts[chunk];
        for (std::size_t p = begin; p < end; ++p) {
          auto noise = sample_path(family.space, family.grid, seed, p);
          double norm;
          double psi_sq = 0.0;
          if (psi.deterministic()) {
            norm = h_norm(terminal_value(family, psi, noise, n));
          } else {
            auto path = stochastic_convolution(family, psi, noise,
                                               ConvMethod::Direct);
            norm = h_norm(path.at(n));
            for (std::size_t j = 0; j < n; ++j)
              psi_sq += family.grid.dt * path.psi_modulation[j] *
                        path.psi_modulation[j];
            psi_sq *= hs_norm_sq(psi, family.space);
          }
          for (std::size_t q = 0; q < n_pairs; ++q) {
            if (norm > ab_pairs[q].first) ++c[q];
            if (!psi.deterministic() &&
                psi_sq > ab_pairs[q].second / (m_t * m_t))
              ++c[n_pairs + q];
          }
        }
      });

  std::vector<TailBoundRecord> records(n_pairs);
  for (std::size_t q = 0; q < n_pairs; ++q) {
    TailBoundRecord& rec = records[q];
    rec.a = ab_pairs[q].first;
    rec.b = ab_pairs[q].second;
    rec.t = t;
    rec.n_paths = n_paths;
    std::size_t psi_count = 0;
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
      rec.exceed_count += counts[chunk][q];
      psi_count += counts[chunk][n_pairs + q];
    }
    rec.p_hat = static_cast<double>(rec.exceed_count) /
                static_cast<double>(n_paths);
    rec.wilson_upper = wilson_upper(rec.exceed_count, n_paths, 3.0);
    rec.chebyshev_term = rec.b / (rec.a * rec.a);
    if (psi.deterministic()) {
      double integral = deterministic_psi_square(psi, family.space, t);
      rec.psi_tail_term = integral > rec.b / (m_t * m_t) ? 1.0 : 0.0;
    } else {
      rec.psi_tail_term =
          static_cast<double>(psi_count) / static_cast<double>(n_paths);
    }
    rec.rhs = rec.chebyshev_term + rec.psi_tail_term;
    rec.nontrivial = rec.rhs <= 1.0;
    rec.holds = !rec.nontrivial || rec.wilson_upper <= rec.rhs;
  }
  return records;
}

TailBoundRecord tail_bound_check(const ResolventFamily& family,
                                 const PsiProcess& psi, double a, double b,
                                 std::size_t n_paths, std::uint64_t seed,
                                 double t, std::size_t n_threads) {
  return tail_bound_table(family, psi, {{a, b}}, n_paths, seed, t,
                          n_threads)[0];
}

SquareTrajectoryRecord square_trajectory_check(const ResolventFamily& family,
                                               const PsiProcess& psi,
                                               std::size_t n_paths,
                                               std::uint64_t seed,
                                               std::size_t n_threads) {
  const double m_t = sup_norm(family);
  const double horizon = family.grid.horizon();
  const std::size_t n_chunks =
      (n_paths + kDefaultChunk - 1) / kDefaultChunk;

  std::vector<MomentAccumulator> traj(n_chunks);
  std::vector<double> psi_double(n_chunks, 0.0);  // pathwise ∫∫ m²·|B|² (adapted)
  parallel_chunks(
      n_paths, kDefaultChunk, n_threads,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
          auto noise = sample_path(family.space, family.grid, seed, p);
          auto path = stochastic_convolution(family, psi, noise);
          traj[chunk].add(trajectory_l2(path));
          if (!psi.deterministic()) {
            double inner = 0.0, total = 0.0;
            for (std::size_t j = 0; j < family.grid.n_steps; ++j) {
              total += family.grid.dt * inner;
              inner += family.grid.dt * path.psi_modulation[j] *
                       path.psi_modulation[j];
            }
            total += family.grid.dt * inner;  // include the last cell
            psi_double[chunk] += total * hs_norm_sq(psi, family.space);
          }
        }
      });

  MomentAccumulator total;
  for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
    total.merge(traj[chunk]);

  SquareTrajectoryRecord rec;
  rec.n_paths = n_paths;
  rec.estimate = total.mean();
  rec.se = total.standard_error();
  if (psi.deterministic()) {
    double base = hs_norm_sq(psi, family.space);
    ScalarSignal phi = psi.variant() == PsiProcess::Variant::ConstantB
                           ? ScalarSignal::one()
                           : psi.modulation_signal();
    rec.bound = m_t * m_t * base * double_square_integral(phi, horizon);
  } else {
    double acc = 0.0;
    for (std::size_t chunk = 0; chunk < n_chunks; ++chunk)
      acc += psi_double[chunk];
    rec.bound = m_t * m_t * acc / static_cast<double>(n_paths);
  }
  rec.holds = rec.estimate <= rec.bound + 3.0 * rec.se;
  return rec;
}

}  // namespace volterra
