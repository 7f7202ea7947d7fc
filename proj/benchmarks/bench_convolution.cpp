#include <benchmark/benchmark.h>

#include "volterra/convolution.hpp"

namespace {

using namespace volterra;

void bm_convolution(benchmark::State& state, ConvMethod method) {
  const auto n_modes = static_cast<std::size_t>(state.range(0));
  const auto n_steps = static_cast<std::size_t>(state.range(1));
  auto space = SpectralSpace::dirichlet_laplacian(n_modes);
  TimeGrid grid{1.0 / static_cast<double>(n_steps), n_steps};
  auto family = build_family(Kernel::constant(1.0), space, grid);
  auto psi = PsiProcess::constant_b(HilbertSchmidtOperator::identity(n_modes));
  auto noise = sample_path(space, grid, 42, 0);
  for (auto _ : state) {
    auto path = stochastic_convolution(family, psi, noise, method);
    benchmark::DoNotOptimize(path.x.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_convolution, direct, volterra::ConvMethod::Direct)
    ->Args({8, 256})
    ->Args({8, 1024})
    ->Args({64, 1024});
BENCHMARK_CAPTURE(bm_convolution, fft, volterra::ConvMethod::Fft)
    ->Args({8, 256})
    ->Args({8, 1024})
    ->Args({64, 1024});
