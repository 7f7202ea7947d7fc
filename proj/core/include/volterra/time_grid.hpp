#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace volterra {

/// Uniform grid 0 = t₀ < t₁ < … < t_n on [0, T], T = n·Δt.
struct TimeGrid {
  double dt = 0.0;
  std::size_t n_steps = 0;

  TimeGrid() = default;
  TimeGrid(double step, std::size_t steps) : dt(step), n_steps(steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("grid requires dt > 0");
    if (n_steps == 0) throw std::invalid_argument("grid requires n_steps >= 1");
  }

  /// Grid covering [0, T] with n_steps = ceil(T/dt).
  static TimeGrid from_horizon(double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0))
      throw std::invalid_argument("grid requires dt > 0 and T > 0");
    auto n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    return TimeGrid(dt, n == 0 ? 1 : n);
  }

  double horizon() const { return dt * static_cast<double>(n_steps); }
  std::size_t n_points() const { return n_steps + 1; }
  double time(std::size_t n) const { return dt * static_cast<double>(n); }

  /// Index of a grid time; throws for off-grid values.
  std::size_t index_of(double t) const {
    double r = t / dt;
    auto n = static_cast<std::size_t>(std::llround(r));
    if (n > n_steps || std::abs(r - static_cast<double>(n)) > 1e-9)
      throw std::invalid_argument("time is not on the grid");
    return n;
  }

  bool operator==(const TimeGrid& o) const {
    return dt == o.dt && n_steps == o.n_steps;
  }
};

}  // namespace volterra
