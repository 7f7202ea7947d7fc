#include <benchmark/benchmark.h>

#include "volterra/resolvent.hpp"

namespace {

using namespace volterra;

void bm_scalar_resolvent(benchmark::State& state, Kernel kernel) {
  TimeGrid grid{1.0 / 512.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    auto s = solve_scalar_resolvent(kernel, -1.0, grid);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_build_family(benchmark::State& state) {
  auto space = SpectralSpace::dirichlet_laplacian(
      static_cast<std::size_t>(state.range(0)));
  TimeGrid grid{1.0 / 512.0, 512};
  Kernel kernel = Kernel::fractional(0.5);
  for (auto _ : state) {
    auto family = build_family(kernel, space, grid);
    benchmark::DoNotOptimize(family.s.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_scalar_resolvent, constant, volterra::Kernel::constant(1.0))
    ->RangeMultiplier(2)
    ->Range(128, 4096)
    ->Complexity();
BENCHMARK_CAPTURE(bm_scalar_resolvent, fractional, volterra::Kernel::fractional(0.5))
    ->RangeMultiplier(2)
    ->Range(128, 4096)
    ->Complexity();
BENCHMARK(bm_build_family)->RangeMultiplier(4)->Range(4, 64);
