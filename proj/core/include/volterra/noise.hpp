#pragma once

#include <cstdint>
#include <vector>

#include "volterra/spectral_space.hpp"
#include "volterra/time_grid.hpp"

namespace volterra {

namespace rng {

/// SplitMix64 finalizer; the basic mixing primitive of the counter-based
/// streams used everywhere in the artifact.
std::uint64_t mix(std::uint64_t z);

/// Combine a word into a running stream key.
std::uint64_t absorb(std::uint64_t key, std::uint64_t word);

/// Uniform in (0,1), derived purely from the key (stateless).
double uniform(std::uint64_t key);

/// Standard normal via Box-Muller on two uniforms derived from the key.
double normal(std::uint64_t key);

/// Fully keyed standard normal: (seed, stream, a, b, c) -> N(0,1).
/// Identical inputs always produce identical output, independent of call
/// order or thread count.
double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                 std::uint64_t b, std::uint64_t c);

// Stream tags keeping independent consumers off each other's draws.
inline constexpr std::uint64_t kStreamNoise = 1;
inline constexpr std::uint64_t kStreamExactGaussian = 2;

}  // namespace rng

/// Truncated cylindrical Wiener increments: dW[k][j] ~ N(0, λ_k·Δt),
/// independent across modes k and steps j. Modes with λ_k = 0 carry
/// identically zero rows.
struct NoisePath {
  TimeGrid grid;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  /// [mode][step], n_steps increments per mode.
  std::vector<std::vector<double>> dw;

  std::size_t modes() const { return dw.size(); }
};

/// Draws the increments for one path. The stream for (seed, path_index,
/// mode, step) is derived by hashing the tuple, so paths can be generated in
/// any order or concurrently with bitwise-identical results.
NoisePath sample_path(const SpectralSpace& space, const TimeGrid& grid,
                      std::uint64_t seed, std::uint64_t path_index);

/// W(t_n) = prefix sum of increments; t must lie on the grid.
std::vector<double> cumulative(const NoisePath& noise, double t);
std::vector<double> cumulative_at(const NoisePath& noise, std::size_t step);

}  // namespace volterra
