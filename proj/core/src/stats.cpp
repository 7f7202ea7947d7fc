#include "volterra/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace volterra {

double MomentAccumulator::variance() const {
  if (count < 2) return 0.0;
  double n = static_cast<double>(count);
  double v = (sum_sq - sum * sum / n) / (n - 1.0);
  return std::max(v, 0.0);
}

double MomentAccumulator::standard_error() const {
  if (count < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(count));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  std::nth_element(values.begin(), values.begin() + mid - 1, values.end());
  return 0.5 * (values[mid - 1] + hi);
}

double wilson_upper(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson interval needs trials > 0");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = p + z2 / (2.0 * n);
  double rad = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::min(1.0, (center + rad) / denom);
}

void parallel_chunks(std::size_t n_items, std::size_t chunk_size,
                     std::size_t n_threads,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& work) {
  if (chunk_size == 0) throw std::invalid_argument("chunk_size must be >= 1");
  const std::size_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
  auto run_chunk = [&](std::size_t c) {
    std::size_t begin = c * chunk_size;
    std::size_t end = std::min(begin + chunk_size, n_items);
    work(c, begin, end);
  };
  if (n_threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::size_t workers = std::min(n_threads, n_chunks);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        run_chunk(c);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace volterra
