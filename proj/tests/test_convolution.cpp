#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "volterra/convolution.hpp"
#include "volterra/stats.hpp"

using namespace volterra;

namespace {

ResolventFamily heat_family(double mu, double dt, std::size_t n) {
  SpectralSpace space({mu}, {1.0});
  return build_family(Kernel::constant(1.0), space, TimeGrid{dt, n});
}

// discrete variance of the left-point convolution in one mode:
// Var W(t_n) = dt * sum_{j<n} s(t_{n-j})^2
double discrete_variance(const std::vector<double>& s, double dt,
                         std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += s[n - j] * s[n - j] * dt;
  return acc;
}

}  // namespace

TEST_CASE("zero noise gives the zero path") {
  SpectralSpace space({-1.0, -4.0}, {0.0, 0.0});
  TimeGrid grid{0.125, 8};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(2));
  auto noise = sample_path(space, grid, 42, 0);
  auto path = stochastic_convolution(family, psi, noise);
  for (const auto& row : path.x)
    for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("flat resolvent reproduces the cumulative noise exactly") {
  SpectralSpace space({0.0, 0.0}, {1.0, 2.0});
  TimeGrid grid{0.125, 8};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(2));
  auto noise = sample_path(space, grid, 42, 5);
  auto path = stochastic_convolution(family, psi, noise);
  for (std::size_t n = 0; n <= grid.n_steps; ++n) {
    auto w = cumulative_at(noise, n);
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(path.x[k][n] == doctest::Approx(w[k]).epsilon(1e-14));
  }
}

TEST_CASE("fft and direct methods agree to 1e-10") {
  SpectralSpace space({-1.0, -4.0, -9.0}, {1.0, 0.5, 2.0});
  TimeGrid grid{1.0 / 64.0, 64};
  auto family = build_family(Kernel::linear(), space, grid);
  auto b = HilbertSchmidtOperator::dense(
      {{1.0, 0.2, 0.0}, {-0.3, 0.9, 0.1}, {0.0, 0.4, 1.1}});
  for (const PsiProcess& psi :
       {PsiProcess::constant_b(b),
        PsiProcess::modulated(b, ScalarSignal::exponential(-0.5))}) {
    for (std::uint64_t p = 0; p < 3; ++p) {
      auto noise = sample_path(space, grid, 42, p);
      auto direct = stochastic_convolution(family, psi, noise,
                                           ConvMethod::Direct);
      auto fft = stochastic_convolution(family, psi, noise, ConvMethod::Fft);
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t n = 0; n <= grid.n_steps; ++n)
          CHECK(std::abs(direct.x[k][n] - fft.x[k][n]) <= 1e-10);
    }
  }
}

TEST_CASE("convolution is linear in the operator for fixed noise") {
  SpectralSpace space({-1.0, -2.0}, {1.0, 1.0});
  TimeGrid grid{0.0625, 16};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto noise = sample_path(space, grid, 42, 1);

  auto b1 = HilbertSchmidtOperator::dense({{1.0, 0.5}, {0.0, 1.0}});
  auto b2 = HilbertSchmidtOperator::dense({{0.2, -0.1}, {0.7, 0.3}});
  std::vector<std::vector<double>> sum_rows(2, std::vector<double>(2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) sum_rows[i][j] = b1(i, j) + b2(i, j);

  auto x1 = stochastic_convolution(family, PsiProcess::constant_b(b1), noise);
  auto x2 = stochastic_convolution(family, PsiProcess::constant_b(b2), noise);
  auto xs = stochastic_convolution(
      family, PsiProcess::constant_b(HilbertSchmidtOperator::dense(sum_rows)),
      noise);
  auto xh = stochastic_convolution(
      family, PsiProcess::constant_b(b1.scaled(-3.0)), noise);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t n = 0; n <= grid.n_steps; ++n) {
      CHECK(xs.x[k][n] ==
            doctest::Approx(x1.x[k][n] + x2.x[k][n]).epsilon(1e-12));
      CHECK(xh.x[k][n] == doctest::Approx(-3.0 * x1.x[k][n]).epsilon(1e-12));
    }
}

TEST_CASE("mild solution composes decay and convolution") {
  SpectralSpace space({-1.0}, {1.0});
  TimeGrid grid{std::ldexp(1.0, -10), 1024};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto noise = sample_path(space, grid, 42, 0);

  // noise-free: pure resolvent decay of X0
  auto silent = PsiProcess::constant_b(HilbertSchmidtOperator::zero(1));
  auto decay = mild_solution(family, {1.0}, silent, noise);
  CHECK(std::abs(decay.x[0].back() - std::exp(-1.0)) <= 1e-4);
  CHECK(decay.x[0][0] == 1.0);
  REQUIRE(decay.mild_condition.has_value());
  CHECK(*decay.mild_condition == 0.0);

  // X0 = 0 reduces to the convolution
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  auto conv = stochastic_convolution(family, psi, noise);
  auto mild = mild_solution(family, {0.0}, psi, noise);
  CHECK(mild.x[0] == conv.x[0]);
  REQUIRE(mild.mild_condition.has_value());
  CHECK(*mild.mild_condition > 0.0);
}

TEST_CASE("covariance quadrature spot values") {
  {
    auto family = heat_family(-1.0, std::ldexp(1.0, -10), 1024);
    auto c0 = covariance_quadrature(family,
                                    HilbertSchmidtOperator::identity(1), 0.0);
    CHECK(c0[0][0] == 0.0);
    auto c1 = covariance_quadrature(family,
                                    HilbertSchmidtOperator::identity(1), 1.0);
    CHECK(std::abs(c1[0][0] - 0.4323324) <= 1e-4);
  }
  {
    SpectralSpace space({0.0, 0.0}, {1.0, 1.0});
    TimeGrid grid{0.125, 8};
    auto family = build_family(Kernel::constant(1.0), space, grid);
    auto c = covariance_quadrature(
        family, HilbertSchmidtOperator::diagonal({1.0, 2.0}), 1.0);
    CHECK(c[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c[1][1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c[0][1] == 0.0);
  }
}

TEST_CASE("covariance is symmetric and positive semidefinite") {
  SpectralSpace space({-1.0, -4.0, -9.0}, {1.0, 0.5, 2.0});
  TimeGrid grid{1.0 / 128.0, 128};
  auto family = build_family(Kernel::linear(), space, grid);
  auto b = HilbertSchmidtOperator::dense(
      {{1.0, 0.3, -0.2}, {0.3, 0.8, 0.1}, {0.0, 0.5, 1.2}});
  auto c = covariance_quadrature(family, b, 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(c[i][j] == doctest::Approx(c[j][i]).epsilon(1e-12));
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    double quad = 0.0;
    std::vector<double> v(3);
    for (std::size_t i = 0; i < 3; ++i)
      v[i] = 2.0 * rng::uniform(rng::absorb(trial, i)) - 1.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) quad += v[i] * c[i][j] * v[j];
    CHECK(quad >= -1e-10);
  }
}

TEST_CASE("monte carlo covariance matches the quadrature") {
  auto family = heat_family(-1.0, std::ldexp(1.0, -9), 512);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(1));
  const std::size_t n_paths = 20000;
  MomentAccumulator acc;
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto noise = sample_path(family.space, family.grid, 42, p);
    acc.add(stochastic_convolution(family, psi, noise).x[0].back());
  }
  auto c = covariance_quadrature(family, HilbertSchmidtOperator::identity(1),
                                 1.0);
  // SE of a variance estimate for Gaussian samples: var * sqrt(2/n)
  double se = c[0][0] * std::sqrt(2.0 / static_cast<double>(n_paths));
  CHECK(std::abs(acc.variance() - c[0][0]) <= 3.0 * se);
  CHECK(std::abs(acc.mean()) <= 3.0 * acc.standard_error());
}

TEST_CASE("exact gaussian sampler has the right law") {
  auto family = heat_family(-1.0, 1.0 / 64.0, 64);
  CHECK(exact_gaussian_sample(family, HilbertSchmidtOperator::zero(1), 1.0, 42,
                              0)[0] == 0.0);
  CHECK_THROWS_AS(
      exact_gaussian_sample(
          family, HilbertSchmidtOperator::dense({{1.0, 0.5}, {0.5, 1.0}}), 1.0,
          42, 0),
      std::invalid_argument);

  const std::size_t n_samples = 100000;
  auto b = HilbertSchmidtOperator::diagonal({1.5});
  MomentAccumulator acc;
  double m3 = 0.0, m4 = 0.0;
  std::vector<double> draws(n_samples);
  for (std::size_t p = 0; p < n_samples; ++p) {
    draws[p] = exact_gaussian_sample(family, b, 1.0, 42, p)[0];
    acc.add(draws[p]);
  }
  double mean = acc.mean();
  double var = acc.variance();
  for (double d : draws) {
    double z = d - mean;
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  m3 /= static_cast<double>(n_samples);
  m4 /= static_cast<double>(n_samples);
  double skew = m3 / std::pow(var, 1.5);
  double ex_kurt = m4 / (var * var) - 3.0;

  auto c = covariance_quadrature(family, b, 1.0);
  CHECK(std::abs(var - c[0][0]) <= 0.05 * c[0][0]);
  CHECK(std::abs(skew) <= 3.0 * std::sqrt(6.0 / static_cast<double>(n_samples)));
  CHECK(std::abs(ex_kurt) <=
        3.0 * std::sqrt(24.0 / static_cast<double>(n_samples)));
}

TEST_CASE("discrete marginal variance converges to the exact law") {
  // gap between the left-point discrete variance and the quadrature variance
  // shrinks at least linearly in dt
  auto gap = [](double dt, std::size_t n) {
    auto family = heat_family(-1.0, dt, n);
    auto c = covariance_quadrature(family,
                                   HilbertSchmidtOperator::identity(1), 1.0);
    return std::abs(discrete_variance(family.s[0], dt, n) - c[0][0]);
  };
  double g7 = gap(std::ldexp(1.0, -7), 128);
  double g8 = gap(std::ldexp(1.0, -8), 256);
  CHECK(g7 / g8 >= 1.8);
}

TEST_CASE("mean-square continuity gap shrinks linearly") {
  auto max_increment = [](double dt, std::size_t n) {
    auto family = heat_family(-1.0, dt, n);
    const auto& s = family.s[0];
    double worst = 0.0;
    for (std::size_t m = 0; m + 1 <= n; ++m) {
      // E|W(t_{m+1}) - W(t_m)|^2 from the increment decomposition
      double acc = s[1] * s[1] * dt;
      for (std::size_t j = 0; j < m; ++j) {
        double d = s[m + 1 - j] - s[m - j];
        acc += d * d * dt;
      }
      worst = std::max(worst, acc);
    }
    return worst;
  };
  double m6 = max_increment(std::ldexp(1.0, -6), 64);
  double m7 = max_increment(std::ldexp(1.0, -7), 128);
  double ratio = m6 / m7;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.5);
}

TEST_CASE("trajectory integral") {
  SpectralSpace space({0.0}, {1.0});
  TimeGrid grid{0.25, 4};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto silent = PsiProcess::constant_b(HilbertSchmidtOperator::zero(1));
  auto noise = sample_path(space, grid, 42, 0);

  auto zero = stochastic_convolution(family, silent, noise);
  CHECK(trajectory_l2(zero) == 0.0);

  // mu = 0, no noise: the path is constant X0, integral is T |X0|^2
  auto flat = mild_solution(family, {2.0}, silent, noise);
  CHECK(trajectory_l2(flat) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("adapted modulation uses only past history") {
  SpectralSpace space({-1.0}, {1.0});
  TimeGrid grid{0.125, 8};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto psi = PsiProcess::adapted(HilbertSchmidtOperator::identity(1), 0.7);

  auto noise_a = sample_path(space, grid, 42, 0);
  auto noise_b = noise_a;
  for (std::size_t j = 4; j < grid.n_steps; ++j) noise_b.dw[0][j] += 1.0;

  auto path_a = stochastic_convolution(family, psi, noise_a,
                                       ConvMethod::Direct);
  auto path_b = stochastic_convolution(family, psi, noise_b,
                                       ConvMethod::Direct);
  for (std::size_t j = 0; j <= 4; ++j) {
    CHECK(path_a.psi_modulation[j] == path_b.psi_modulation[j]);
    CHECK(path_a.x[0][j] == path_b.x[0][j]);
  }
  CHECK(path_a.x[0][6] != path_b.x[0][6]);
  for (double m : path_a.psi_modulation) CHECK(std::abs(m) <= 0.7);
}
