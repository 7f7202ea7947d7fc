#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "volterra/noise.hpp"
#include "volterra/process.hpp"
#include "volterra/resolvent.hpp"
#include "volterra/spectral_space.hpp"

using namespace volterra;

TEST_CASE("dirichlet laplacian spectrum") {
  auto space = SpectralSpace::dirichlet_laplacian(4);
  CHECK(space.mu == std::vector<double>{-1.0, -4.0, -9.0, -16.0});
  CHECK(space.lambda == std::vector<double>(4, 1.0));
  CHECK(space.trace_q() == 4.0);
}

TEST_CASE("construction validates q eigenvalues") {
  CHECK_THROWS_AS(SpectralSpace({-1.0}, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(SpectralSpace({-1.0, -2.0}, {1.0}), std::invalid_argument);
  SpectralSpace ok({-1.0}, {0.0});  // lambda = 0 is the cylindrical cut-off
  CHECK(ok.trace_q() == 0.0);
}

TEST_CASE("hilbert-schmidt norm spot values") {
  auto space4 = SpectralSpace({0, 0, 0, 0}, {1, 1, 1, 1});
  CHECK(hs_norm(HilbertSchmidtOperator::identity(4), space4) == 2.0);
  CHECK(hs_norm(HilbertSchmidtOperator::zero(4), space4) == 0.0);

  SpectralSpace space2({0, 0}, {0.5, 0.25});
  CHECK(hs_norm(HilbertSchmidtOperator::diagonal({1.0, 2.0}), space2) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
}

TEST_CASE("hs norm is a norm on random operators") {
  const std::size_t n = 5;
  SpectralSpace space(std::vector<double>(n, -1.0), {0.3, 1.2, 0.0, 2.0, 0.7});
  auto random_op = [&](std::uint64_t key) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        rows[i][j] = 2.0 * rng::uniform(rng::absorb(key, i * n + j)) - 1.0;
    return HilbertSchmidtOperator::dense(rows);
  };
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto a = random_op(rng::absorb(7, trial));
    auto b = random_op(rng::absorb(13, trial));
    std::vector<std::vector<double>> sum_rows(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum_rows[i][j] = a(i, j) + b(i, j);
    auto sum = HilbertSchmidtOperator::dense(sum_rows);
    CHECK(hs_norm(sum, space) <= hs_norm(a, space) + hs_norm(b, space) + 1e-12);
    CHECK(hs_norm(a.scaled(-2.5), space) ==
          doctest::Approx(2.5 * hs_norm(a, space)).epsilon(1e-13));
  }
}

TEST_CASE("graph norm spot values and lower bound") {
  SpectralSpace zero_mode({0.0}, {1.0});
  CHECK(graph_norm(std::vector<double>{1.0}, zero_mode) == 1.0);

  SpectralSpace one_mode({-1.0}, {1.0});
  CHECK(graph_norm(std::vector<double>{1.0}, one_mode) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  SpectralSpace two({-1.0, -4.0}, {1.0, 1.0});
  std::vector<double> h{1.0, 1.0};
  CHECK(graph_norm(h, two) == doctest::Approx(std::sqrt(19.0)).epsilon(1e-14));
  CHECK(graph_norm(h, two) >= h_norm(h));
}

TEST_CASE("A acts diagonally") {
  SpectralSpace space({-1.0, -4.0, -9.0}, {1.0, 1.0, 1.0});
  CHECK(apply_A(std::vector<double>{0.0, 0.0, 0.0}, space) ==
        std::vector<double>{0.0, 0.0, 0.0});
  CHECK(apply_A(std::vector<double>{0.0, 1.0, 0.0}, space) ==
        std::vector<double>{0.0, -4.0, 0.0});
  CHECK(apply_A(std::vector<double>{1.0, 1.0, 1.0}, space) ==
        std::vector<double>{-1.0, -4.0, -9.0});
}

TEST_CASE("resolvent action commutes with A exactly") {
  SpectralSpace space({-1.0, -4.0, -9.0}, {1.0, 1.0, 1.0});
  TimeGrid grid{0.0625, 16};
  auto family = build_family(Kernel::linear(), space, grid);
  for (std::size_t k = 0; k < space.modes(); ++k)
    for (std::size_t n = 0; n <= grid.n_steps; ++n) {
      double a_then_s = family.s[k][n] * space.mu[k];
      double s_then_a = space.mu[k] * family.s[k][n];
      CHECK(a_then_s == s_then_a);
    }
}

TEST_CASE("psi norm over N^2(0,T)") {
  SpectralSpace space4({0, 0, 0, 0}, {1, 1, 1, 1});
  TimeGrid grid{0.125, 8};

  // constant B with hs_norm 2 on [0,1]
  auto b = HilbertSchmidtOperator::identity(4);
  CHECK(psi_norm_n2(PsiProcess::constant_b(b), space4, grid) ==
        doctest::Approx(2.0).epsilon(1e-14));

  // sqrt(t) modulation of a unit-norm operator: (int_0^1 t dt)^{1/2}
  SpectralSpace space1({0.0}, {1.0});
  auto psi = PsiProcess::modulated(HilbertSchmidtOperator::identity(1),
                                   ScalarSignal::sqrt_t());
  CHECK(psi_norm_n2(psi, space1, grid) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  CHECK(psi_norm_n2(PsiProcess::constant_b(HilbertSchmidtOperator::zero(4)),
                    space4, grid) == 0.0);

  CHECK_THROWS_AS(
      psi_norm_n2(PsiProcess::adapted(HilbertSchmidtOperator::identity(4), 1.0),
                  space4, grid),
      std::logic_error);
}
