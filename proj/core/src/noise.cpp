#include "volterra/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace volterra {

namespace rng {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t absorb(std::uint64_t key, std::uint64_t word) {
  return mix(key + kGolden * (word + 1));
}

double uniform(std::uint64_t key) {
  // 53 mantissa bits shifted into (0,1); never exactly 0 or 1.
  return (static_cast<double>(mix(key) >> 11) + 0.5) * 0x1p-53;
}

double normal(std::uint64_t key) {
  double u1 = uniform(key + 1);
  double u2 = uniform(key + 2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                 std::uint64_t b, std::uint64_t c) {
  std::uint64_t key = absorb(seed, stream);
  key = absorb(key, a);
  key = absorb(key, b);
  key = absorb(key, c);
  return normal(key);
}

}  // namespace rng

NoisePath sample_path(const SpectralSpace& space, const TimeGrid& grid,
                      std::uint64_t seed, std::uint64_t path_index) {
  NoisePath path{grid, seed, path_index, {}};
  path.dw.assign(space.modes(), std::vector<double>(grid.n_steps, 0.0));
  for (std::size_t k = 0; k < space.modes(); ++k) {
    double lam = space.lambda[k];
    if (lam == 0.0) continue;
    double sd = std::sqrt(lam * grid.dt);
    auto& row = path.dw[k];
    for (std::size_t j = 0; j < grid.n_steps; ++j)
      row[j] = sd * rng::normal_at(seed, rng::kStreamNoise, path_index, k, j);
  }
  return path;
}

std::vector<double> cumulative_at(const NoisePath& noise, std::size_t step) {
  if (step > noise.grid.n_steps)
    throw std::invalid_argument("step beyond grid");
  std::vector<double> w(noise.modes(), 0.0);
  for (std::size_t k = 0; k < noise.modes(); ++k)
    for (std::size_t j = 0; j < step; ++j) w[k] += noise.dw[k][j];
  return w;
}

std::vector<double> cumulative(const NoisePath& noise, double t) {
  return cumulative_at(noise, noise.grid.index_of(t));
}

}  // namespace volterra
