#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace volterra {

/// Plain-sum moment accumulator. Merging two accumulators adds their sums,
/// so a fixed merge order gives bit-reproducible results.
struct MomentAccumulator {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const MomentAccumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  /// Unbiased sample variance.
  double variance() const;
  /// Standard error of the mean.
  double standard_error() const;
};

double median(std::vector<double> values);

/// Upper end of the Wilson score interval for a binomial proportion.
double wilson_upper(std::size_t successes, std::size_t trials, double z);

/// Runs work(chunk_index, begin, end) over [0, n_items) split into fixed-size
/// chunks. Chunk boundaries depend only on chunk_size, never on n_threads, so
/// per-chunk results merged in chunk order are deterministic under any
/// parallelism. n_threads == 1 runs inline.
void parallel_chunks(std::size_t n_items, std::size_t chunk_size,
                     std::size_t n_threads,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& work);

inline constexpr std::size_t kDefaultChunk = 256;

}  // namespace volterra
