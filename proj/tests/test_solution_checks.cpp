#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "volterra/solution_checks.hpp"
#include "volterra/stats.hpp"

using namespace volterra;

namespace {

struct Setup {
  SpectralSpace space;
  TimeGrid grid;
  ResolventFamily family;
  PsiProcess psi;

  Setup(const Kernel& kernel, const std::vector<double>& mu, double dt,
        std::size_t n_steps)
      : space(mu, std::vector<double>(mu.size(), 1.0)),
        grid{dt, n_steps},
        family(build_family(kernel, space, grid)),
        psi(PsiProcess::constant_b(
            HilbertSchmidtOperator::identity(space.modes()))) {}
};

double median_weak(const Kernel& kernel, double dt, std::size_t n_steps,
                   std::size_t n_paths) {
  SpectralSpace space({-1.0}, {1.0});
  TimeGrid grid{dt, n_steps};
  auto family = build_family(kernel, space, grid);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  TestFunctional xi;
  xi.xi0 = {1.0};
  std::vector<double> residuals(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto noise = sample_path(space, grid, 42, p);
    auto path = mild_solution(family, {0.0}, psi, noise);
    residuals[p] = weak_residual(path, xi, kernel, space, psi, noise,
                                 grid.horizon());
  }
  return median(residuals);
}

double median_strong(const Kernel& kernel, double dt, std::size_t n_steps,
                     std::size_t n_paths) {
  SpectralSpace space({-1.0}, {1.0});
  TimeGrid grid{dt, n_steps};
  auto family = build_family(kernel, space, grid);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  std::vector<double> residuals(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto noise = sample_path(space, grid, 42, p);
    auto path = stochastic_convolution(family, psi, noise);
    residuals[p] = strong_residual(path, kernel, space, psi, noise,
                                   grid.horizon());
  }
  return median(residuals);
}

}  // namespace

TEST_CASE("weak residual vanishes exactly on the zero path") {
  Setup s(Kernel::constant(1.0), {-1.0, -4.0}, 0.125, 8);
  auto silent = PsiProcess::constant_b(HilbertSchmidtOperator::zero(2));
  auto noise = sample_path(s.space, s.grid, 42, 0);
  auto path = mild_solution(s.family, {0.0, 0.0}, silent, noise);
  TestFunctional xi;
  xi.xi0 = {1.0, 1.0};
  CHECK(weak_residual(path, xi, s.family.kernel, s.space, silent, noise,
                      1.0) == 0.0);
  xi.xi0 = {0.0, 0.0};
  auto live = mild_solution(s.family, {0.0, 0.0}, s.psi, noise);
  CHECK(weak_residual(live, xi, s.family.kernel, s.space, s.psi, noise,
                      1.0) == 0.0);
}

TEST_CASE("test functional orthogonal to the active modes gives zero") {
  SpectralSpace space({-1.0, -4.0}, {1.0, 0.0});
  TimeGrid grid{0.125, 8};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(2));
  auto noise = sample_path(space, grid, 42, 0);
  auto path = mild_solution(family, {0.0, 0.0}, psi, noise);
  TestFunctional xi;
  xi.xi0 = {0.0, 1.0};  // mode 2 carries no noise and no initial value
  CHECK(weak_residual(path, xi, family.kernel, space, psi, noise, 1.0) == 0.0);
}

TEST_CASE("weak residual self-converges under grid refinement") {
  const std::size_t n_paths = 60;
  double m7 = median_weak(Kernel::constant(1.0), std::ldexp(1.0, -7), 128,
                          n_paths);
  double m8 = median_weak(Kernel::constant(1.0), std::ldexp(1.0, -8), 256,
                          n_paths);
  CHECK(m7 / m8 >= 1.4);
  CHECK(m8 <= 5e-2);  // scale: path sup norm is O(1) here
}

TEST_CASE("strong residual cases") {
  // zero noise: exactly zero
  Setup s(Kernel::constant(1.0), {-1.0}, 0.125, 8);
  auto silent = PsiProcess::constant_b(HilbertSchmidtOperator::zero(1));
  auto noise = sample_path(s.space, s.grid, 42, 0);
  auto zero_path = stochastic_convolution(s.family, silent, noise);
  CHECK(strong_residual(zero_path, s.family.kernel, s.space, silent, noise,
                        1.0) == 0.0);

  // mu = 0: the convolution collapses to the plain stochastic integral
  SpectralSpace flat({0.0}, {1.0});
  auto family = build_family(Kernel::constant(1.0), flat, TimeGrid{0.125, 8});
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  auto path = stochastic_convolution(family, psi, noise);
  CHECK(strong_residual(path, family.kernel, flat, psi, noise, 1.0) <= 1e-14);

  // heat case self-convergence
  double m7 = median_strong(Kernel::constant(1.0), std::ldexp(1.0, -7), 128, 60);
  double m8 = median_strong(Kernel::constant(1.0), std::ldexp(1.0, -8), 256, 60);
  CHECK(m7 / m8 >= 1.4);
  CHECK(m8 <= 5e-2);
}

TEST_CASE("ito residual reduces to the weak residual for constant phi") {
  Setup s(Kernel::constant(1.0), {-1.0}, std::ldexp(1.0, -6), 64);
  auto noise = sample_path(s.space, s.grid, 42, 3);
  auto path = mild_solution(s.family, {0.0}, s.psi, noise);
  TestFunctional xi;
  xi.xi0 = {1.0};
  double weak = weak_residual(path, xi, s.family.kernel, s.space, s.psi,
                              noise, 1.0);
  double ito = ito_representation_residual(path, xi, s.family.kernel, s.space,
                                           s.psi.operator_part(), noise, 1.0);
  CHECK(ito == doctest::Approx(weak).epsilon(1e-12));
}

TEST_CASE("ito residual, deterministic exponential test function") {
  // B = 0, X0 = e1, a = 1, mu = -1, phi = e^tau: every term is classical
  SpectralSpace space({-1.0}, {1.0});
  TimeGrid grid{std::ldexp(1.0, -10), 1024};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto silent = PsiProcess::constant_b(HilbertSchmidtOperator::zero(1));
  auto noise = sample_path(space, grid, 42, 0);
  auto path = mild_solution(family, {1.0}, silent, noise);
  TestFunctional xi;
  xi.xi0 = {1.0};
  xi.phi = ScalarSignal::exponential(1.0);
  double r = ito_representation_residual(path, xi, family.kernel, space,
                                         silent.operator_part(), noise, 1.0);
  CHECK(r <= 1e-3);
}

TEST_CASE("ito residual requires a differentiable kernel and C1 phi") {
  Setup s(Kernel::fractional(0.5), {-1.0}, 0.125, 8);
  auto noise = sample_path(s.space, s.grid, 42, 0);
  auto path = mild_solution(s.family, {0.0}, s.psi, noise);
  TestFunctional xi;
  xi.xi0 = {1.0};
  CHECK_THROWS_AS(
      ito_representation_residual(path, xi, s.family.kernel, s.space,
                                  s.psi.operator_part(), noise, 1.0),
      std::logic_error);

  Setup smooth(Kernel::constant(1.0), {-1.0}, 0.125, 8);
  auto path2 = mild_solution(smooth.family, {0.0}, smooth.psi, noise);
  xi.phi = ScalarSignal::sqrt_t();
  CHECK_THROWS_AS(
      ito_representation_residual(path2, xi, smooth.family.kernel,
                                  smooth.space, smooth.psi.operator_part(),
                                  noise, 1.0),
      std::logic_error);
}

TEST_CASE("ito residual decreases under refinement") {
  auto run = [](double dt, std::size_t n_steps) {
    SpectralSpace space({-1.0}, {1.0});
    TimeGrid grid{dt, n_steps};
    auto family = build_family(Kernel::constant(1.0), space, grid);
    auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
    TestFunctional xi;
    xi.xi0 = {1.0};
    xi.phi = ScalarSignal::exponential(0.5);
    std::vector<double> residuals(60);
    for (std::size_t p = 0; p < residuals.size(); ++p) {
      auto noise = sample_path(space, grid, 42, p);
      auto path = mild_solution(family, {0.0}, psi, noise);
      residuals[p] = ito_representation_residual(
          path, xi, family.kernel, space, psi.operator_part(), noise, 1.0);
    }
    return median(residuals);
  };
  double m6 = run(std::ldexp(1.0, -6), 64);
  double m7 = run(std::ldexp(1.0, -7), 128);
  CHECK(m6 / m7 >= 1.2);
}

TEST_CASE("fubini interchange gap is rounding noise") {
  Setup s(Kernel::linear(), {-1.0, -4.0}, std::ldexp(1.0, -6), 64);
  SpectralSpace space({-1.0, -4.0}, {1.0, 1.0});
  auto family = build_family(Kernel::linear(), space, s.grid);
  auto psi = PsiProcess::modulated(HilbertSchmidtOperator::identity(2),
                                   ScalarSignal::exponential(-1.0));
  auto noise = sample_path(space, s.grid, 42, 0);
  CHECK(dirichlet_fubini_gap(family, psi, noise, 1.0) <= 1e-10);

  auto adapted = PsiProcess::adapted(HilbertSchmidtOperator::identity(2), 1.0);
  CHECK_THROWS_AS(dirichlet_fubini_gap(family, adapted, noise, 1.0),
                  std::invalid_argument);
}

TEST_CASE("solution chain on the zero configuration") {
  ChainConfig config;
  config.kernel = Kernel::constant(1.0);
  config.space = SpectralSpace({-1.0, -4.0}, {1.0, 1.0});
  config.grid = TimeGrid{0.125, 8};
  config.psi = PsiProcess::constant_b(HilbertSchmidtOperator::zero(2));
  config.n_paths = 4;
  auto report = check_solution_chain(config);
  CHECK(report.weak_median == 0.0);
  CHECK(report.strong_median == 0.0);
  CHECK(report.ito_median == 0.0);
  CHECK(report.pass);
}

TEST_CASE("solution chain on the heat configuration") {
  ChainConfig config;
  config.kernel = Kernel::constant(1.0);
  config.space = SpectralSpace::dirichlet_laplacian(4);
  config.grid = TimeGrid{std::ldexp(1.0, -9), 512};
  config.psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(4));
  config.n_paths = 40;
  config.n_threads = 4;
  auto report = check_solution_chain(config);
  CHECK(report.ito_applicable);
  CHECK(report.pass);
  CHECK(report.mode_identity_gap <= 1e-3);
  CHECK(report.fubini_gap <= 1e-10);
}

TEST_CASE("solution chain skips ito checks with a reason") {
  ChainConfig config;
  config.kernel = Kernel::fractional(0.5);
  config.space = SpectralSpace({-1.0}, {1.0});
  config.grid = TimeGrid{std::ldexp(1.0, -8), 256};
  config.psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  config.n_paths = 20;
  auto report = check_solution_chain(config);
  CHECK_FALSE(report.ito_applicable);
  CHECK(report.ito_skip_reason == "kernel not differentiable");
  CHECK(report.weak_pass);
  CHECK(report.strong_pass);

  config.kernel = Kernel::constant(1.0);
  config.psi = PsiProcess::adapted(HilbertSchmidtOperator::identity(1), 1.0);
  auto report2 = check_solution_chain(config);
  CHECK_FALSE(report2.ito_applicable);
  CHECK(report2.ito_skip_reason == "psi is not a constant operator");
}
