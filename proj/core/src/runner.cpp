#include "volterra/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "volterra/convolution.hpp"
#include "volterra/estimates.hpp"
#include "volterra/resolvent.hpp"
#include "volterra/solution_checks.hpp"
#include "volterra/stats.hpp"
#include "volterra/version.hpp"

namespace volterra {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

namespace fs = std::filesystem;

fs::path resolve_output_dir(const RunConfig& config) {
  const char* env = std::getenv(kOutputDirEnv);
  fs::path dir = env && *env ? fs::path(env) : fs::path(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_artifact(const fs::path& dir, const std::string& name,
                            const RunConfig& config) {
  fs::path file = dir / name;
  std::ofstream out(file, std::ios::binary);  // binary keeps \n on every OS
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "# volterra " << kVersion << "\n";
  out << "# config " << config.effective_json << "\n";
  return out;
}

std::size_t effective_paths(const RunConfig& config, const RunOptions& opt) {
  std::size_t n = opt.paths_override ? opt.paths_override : config.paths;
  if (n == 0) throw std::invalid_argument("paths must be positive");
  return n;
}

int run_resolvent(const RunConfig& config, const fs::path& dir,
                  std::ostream& log) {
  auto family = build_family(config.kernel, config.space, config.grid);
  auto out = open_artifact(dir, "resolvent.csv", config);
  out << "t";
  for (std::size_t k = 0; k < family.modes(); ++k) out << ",s_" << (k + 1);
  out << "\n";
  for (std::size_t n = 0; n < config.grid.n_points(); ++n) {
    out << fmt17(config.grid.time(n));
    for (std::size_t k = 0; k < family.modes(); ++k)
      out << "," << fmt17(family.s[k][n]);
    out << "\n";
  }
  log << "resolvent: wrote " << (dir / "resolvent.csv").string() << " ("
      << family.modes() << " modes, residual "
      << fmt17(resolvent_residual(family)) << ")\n";
  return 0;
}

int run_resolvent_convergence(const RunConfig& config, const fs::path& dir,
                              std::ostream& log) {
  auto out = open_artifact(dir, "resolvent_convergence.csv", config);
  out << "dt,residual,oracle_error\n";
  double horizon = config.grid.horizon();
  int status = 0;
  double prev_residual = 0.0;
  for (int level = 0; level < 3; ++level) {
    TimeGrid grid{config.grid.dt / static_cast<double>(1 << level),
                  config.grid.n_steps << level};
    auto family = build_family(config.kernel, config.space, grid);
    double residual = resolvent_residual(family);

    // worst closed-form error over modes at t = T, when a formula exists
    double oracle_error = 0.0;
    bool have_oracle = false;
    for (std::size_t k = 0; k < family.modes(); ++k) {
      auto exact = config.kernel.analytic_resolvent(config.space.mu[k], horizon);
      if (!exact) continue;
      have_oracle = true;
      oracle_error = std::max(
          oracle_error, std::abs(family.s[k][grid.n_steps] - *exact));
    }
    if (!have_oracle) oracle_error = std::nan("");

    out << fmt17(grid.dt) << "," << fmt17(residual) << ","
        << fmt17(oracle_error) << "\n";
    if (level > 0 && residual > 0.0 && prev_residual / residual < 1.4) {
      log << "resolvent-convergence: residual ratio "
          << fmt17(prev_residual / residual) << " below 1.4 at dt "
          << fmt17(grid.dt) << "\n";
      status = 1;
    }
    prev_residual = residual;
  }
  log << "resolvent-convergence: wrote "
      << (dir / "resolvent_convergence.csv").string() << "\n";
  return status;
}

int run_simulate(const RunConfig& config, const RunOptions& opt,
                 const fs::path& dir, std::ostream& log) {
  const std::size_t n_paths = effective_paths(config, opt);
  auto family = build_family(config.kernel, config.space, config.grid);
  const std::size_t n_modes = family.modes();
  const std::size_t n_times = config.grid.n_points();
  const std::size_t n_dump = std::min(opt.sample_paths, n_paths);

  // requested covariance pairs: the leading off-diagonal one when it exists
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n_modes >= 2) pairs.emplace_back(0, 1);

  struct Slot {
    std::vector<double> sum, sum_sq, cross;
  };
  const std::size_t n_chunks = (n_paths + kDefaultChunk - 1) / kDefaultChunk;
  std::vector<Slot> slots(n_chunks);
  std::vector<SolutionPath> dumped(n_dump);

  parallel_chunks(
      n_paths, kDefaultChunk, opt.n_threads,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& slot = slots[chunk];
        slot.sum.assign(n_modes * n_times, 0.0);
        slot.sum_sq.assign(n_modes * n_times, 0.0);
        slot.cross.assign(pairs.size() * n_times, 0.0);
        for (std::size_t p = begin; p < end; ++p) {
          auto noise = sample_path(config.space, config.grid, config.seed, p);
          auto path = mild_solution(family, config.x0, config.psi, noise);
          for (std::size_t k = 0; k < n_modes; ++k)
            for (std::size_t n = 0; n < n_times; ++n) {
              double v = path.x[k][n];
              slot.sum[k * n_times + n] += v;
              slot.sum_sq[k * n_times + n] += v * v;
            }
          for (std::size_t q = 0; q < pairs.size(); ++q)
            for (std::size_t n = 0; n < n_times; ++n)
              slot.cross[q * n_times + n] +=
                  path.x[pairs[q].first][n] * path.x[pairs[q].second][n];
          if (p < n_dump) dumped[p] = std::move(path);
        }
      });

  for (std::size_t p = 0; p < n_dump; ++p) {
    char name[32];
    std::snprintf(name, sizeof(name), "path_%04zu.csv", p);
    auto out = open_artifact(dir, name, config);
    out << "t";
    for (std::size_t k = 0; k < n_modes; ++k) out << ",x_" << (k + 1);
    out << "\n";
    for (std::size_t n = 0; n < n_times; ++n) {
      out << fmt17(config.grid.time(n));
      for (std::size_t k = 0; k < n_modes; ++k)
        out << "," << fmt17(dumped[p].x[k][n]);
      out << "\n";
    }
  }

  auto out = open_artifact(dir, "moments.csv", config);
  out << "t";
  for (std::size_t k = 0; k < n_modes; ++k) out << ",mean_" << (k + 1);
  for (std::size_t k = 0; k < n_modes; ++k) out << ",var_" << (k + 1);
  for (auto& pr : pairs)
    out << ",cov_" << (pr.first + 1) << "_" << (pr.second + 1);
  out << "\n";
  const double np = static_cast<double>(n_paths);
  for (std::size_t n = 0; n < n_times; ++n) {
    out << fmt17(config.grid.time(n));
    std::vector<double> means(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
      double s = 0.0;
      for (auto& slot : slots) s += slot.sum[k * n_times + n];
      means[k] = s / np;
      out << "," << fmt17(means[k]);
    }
    for (std::size_t k = 0; k < n_modes; ++k) {
      double sq = 0.0;
      for (auto& slot : slots) sq += slot.sum_sq[k * n_times + n];
      double var = n_paths > 1
                       ? std::max(0.0, (sq - np * means[k] * means[k]) /
                                           (np - 1.0))
                       : 0.0;
      out << "," << fmt17(var);
    }
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      double cr = 0.0;
      for (auto& slot : slots) cr += slot.cross[q * n_times + n];
      double cov = n_paths > 1
                       ? (cr - np * means[pairs[q].first] *
                                   means[pairs[q].second]) /
                             (np - 1.0)
                       : 0.0;
      out << "," << fmt17(cov);
    }
    out << "\n";
  }

  if (opt.dump_noise) {
    auto noise = sample_path(config.space, config.grid, config.seed, 0);
    auto nout = open_artifact(dir, "noise_increments.csv", config);
    nout << "step";
    for (std::size_t k = 0; k < n_modes; ++k) nout << ",dw_" << (k + 1);
    nout << "\n";
    for (std::size_t j = 0; j < config.grid.n_steps; ++j) {
      nout << j;
      for (std::size_t k = 0; k < n_modes; ++k)
        nout << "," << fmt17(noise.dw[k][j]);
      nout << "\n";
    }
  }

  log << "simulate: " << n_paths << " paths, wrote "
      << (dir / "moments.csv").string() << " and " << n_dump
      << " per-path files\n";
  return 0;
}

int run_verify(const RunConfig& config, const RunOptions& opt,
               const fs::path& dir, std::ostream& log) {
  ChainConfig chain;
  chain.kernel = config.kernel;
  chain.space = config.space;
  chain.psi = config.psi;
  chain.x0 = config.x0;
  chain.seed = config.seed;
  chain.n_paths = opt.paths_override ? opt.paths_override : 100;
  chain.n_threads = opt.n_threads;

  auto out = open_artifact(dir, "verify_report.txt", config);
  out << "check " << opt.check << "\n";
  out << "paths " << chain.n_paths << "\n";

  bool all_pass = true;
  const int levels = opt.dt_sweep ? 3 : 1;
  for (int level = 0; level < levels; ++level) {
    chain.grid = TimeGrid{config.grid.dt / static_cast<double>(1 << level),
                          config.grid.n_steps << level};
    auto report = check_solution_chain(chain);

    out << "dt " << fmt17(chain.grid.dt) << "\n";
    out << "  sup_norm_median " << fmt17(report.sup_norm_median) << "\n";
    out << "  tolerance " << fmt17(report.tolerance) << "\n";
    out << "  mode_identity_gap " << fmt17(report.mode_identity_gap) << "\n";
    out << "  fubini_gap " << fmt17(report.fubini_gap) << "\n";

    bool pass = true;
    auto emit = [&](const char* name, double median, bool ok) {
      out << "  " << name << "_median " << fmt17(median) << " "
          << (ok ? "pass" : "FAIL") << "\n";
      pass = pass && ok;
    };
    if (opt.check == "chain" || opt.check == "weak")
      emit("weak", report.weak_median, report.weak_pass);
    if (opt.check == "chain" || opt.check == "strong")
      emit("strong", report.strong_median, report.strong_pass);
    if (opt.check == "chain" || opt.check == "ito") {
      if (report.ito_applicable)
        emit("ito", report.ito_median, report.ito_pass);
      else
        out << "  ito skipped: " << report.ito_skip_reason << "\n";
    }
    out << "  result " << (pass ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && pass;
  }

  log << "verify: " << (all_pass ? "pass" : "FAIL") << ", report "
      << (dir / "verify_report.txt").string() << "\n";
  return all_pass ? 0 : 1;
}

struct EstimateRow {
  std::string config_name, quantity;
  double lhs, rhs, se;
  bool pass;
};

void estimate_one(const RunConfig& config, const std::string& name,
                  std::size_t n_paths, std::size_t n_threads,
                  std::vector<EstimateRow>& rows) {
  auto family = build_family(config.kernel, config.space, config.grid);
  const double cap = 3.0;

  auto moment = moment_bound_check(family, config.psi, n_paths, config.seed,
                                   cap, n_threads);
  rows.push_back({name, "moment_sup", moment.sup_estimate, moment.rhs,
                  moment.sup_se,
                  moment.inequality_holds() && moment.ratio_within(cap)});

  // (a, b) grid scaled by the structural size M_T^2 * E∫|Ψ|², so the bound is
  // nontrivial for every configuration
  double base = moment.m_t * moment.m_t * moment.psi_norm * moment.psi_norm;
  const double t = family.grid.horizon();
  const double factors[][2] = {{2.0, 1.0}, {3.0, 1.0}, {4.0, 2.0}};
  std::vector<std::pair<double, double>> ab_pairs;
  for (auto [ka, kb] : factors)
    ab_pairs.emplace_back(ka * std::sqrt(base), kb * base);
  auto table = tail_bound_table(family, config.psi, ab_pairs, n_paths,
                                config.seed, t, n_threads);
  for (std::size_t q = 0; q < table.size(); ++q) {
    const auto& rec = table[q];
    char label[64];
    std::snprintf(label, sizeof(label), "tail_a%.3g_b%.3g", factors[q][0],
                  factors[q][1]);
    double se = std::sqrt(rec.p_hat * (1.0 - rec.p_hat) /
                          static_cast<double>(n_paths));
    rows.push_back({name, label, rec.wilson_upper, rec.rhs, se, rec.holds});
  }

  auto traj = square_trajectory_check(family, config.psi, n_paths,
                                      config.seed, n_threads);
  rows.push_back(
      {name, "square_trajectory", traj.estimate, traj.bound, traj.se,
       traj.holds});
}

int run_estimate(const RunConfig& config, const RunOptions& opt,
                 const fs::path& dir, std::ostream& log) {
  const std::size_t n_paths = effective_paths(config, opt);
  std::vector<EstimateRow> rows;

  if (opt.config_matrix) {
    struct KernelCase {
      const char* name;
      Kernel kernel;
    };
    const KernelCase kernels[] = {{"constant", Kernel::constant(1.0)},
                                  {"linear", Kernel::linear()},
                                  {"fractional05", Kernel::fractional(0.5)}};
    for (const auto& kc : kernels)
      for (std::size_t n_modes : {std::size_t{1}, std::size_t{8},
                                  std::size_t{64}}) {
        RunConfig cell = config;
        cell.kernel = kc.kernel;
        cell.space = SpectralSpace::dirichlet_laplacian(n_modes);
        cell.psi = PsiProcess::constant_b(
            HilbertSchmidtOperator::identity(n_modes));
        cell.x0.assign(n_modes, 0.0);
        char name[48];
        std::snprintf(name, sizeof(name), "%s_N%zu", kc.name, n_modes);
        estimate_one(cell, name, n_paths, opt.n_threads, rows);
      }
  } else {
    estimate_one(config, "config", n_paths, opt.n_threads, rows);
  }

  auto out = open_artifact(dir, "estimates.csv", config);
  out << "config,quantity,lhs,rhs,se,pass\n";
  bool all_pass = true;
  for (const auto& row : rows) {
    out << row.config_name << "," << row.quantity << "," << fmt17(row.lhs)
        << "," << fmt17(row.rhs) << "," << fmt17(row.se) << ","
        << (row.pass ? "true" : "false") << "\n";
    if (!row.pass)
      log << "estimate: " << row.config_name << " " << row.quantity
          << " failed (lhs " << fmt17(row.lhs) << ", rhs " << fmt17(row.rhs)
          << ")\n";
    all_pass = all_pass && row.pass;
  }
  log << "estimate: " << (all_pass ? "pass" : "FAIL") << ", wrote "
      << (dir / "estimates.csv").string() << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, const std::string& subcommand,
        const RunOptions& options, std::ostream& log) {
  fs::path dir = resolve_output_dir(config);
  if (subcommand == "resolvent") return run_resolvent(config, dir, log);
  if (subcommand == "resolvent-convergence")
    return run_resolvent_convergence(config, dir, log);
  if (subcommand == "simulate") return run_simulate(config, options, dir, log);
  if (subcommand == "verify") return run_verify(config, options, dir, log);
  if (subcommand == "estimate") return run_estimate(config, options, dir, log);
  throw std::invalid_argument("unknown subcommand: " + subcommand);
}

}  // namespace volterra
