#pragma once

#include <cmath>

#include "fracrd/errors.hpp"

namespace fracrd {

/// Uniform node-centered grid on [x_min, x_max] with n_cells intervals.
struct SpatialGrid {
  int n_cells;
  double x_min;
  double x_max;

  SpatialGrid(int cells, double a, double b) : n_cells(cells), x_min(a), x_max(b) {
    if (cells < 1) throw ConfigError("spatial grid needs at least one cell");
    if (!(b > a)) throw ConfigError("spatial grid needs x_max > x_min");
  }

  int n_nodes() const { return n_cells + 1; }
  double h() const { return (x_max - x_min) / n_cells; }
  double node(int j) const { return x_min + j * h(); }

  /// Same extent, factor-times finer. Shared nodes sit at multiples of factor.
  SpatialGrid refined(int factor = 2) const { return {n_cells * factor, x_min, x_max}; }

  bool operator==(const SpatialGrid&) const = default;
};

/// Uniform time levels 0 = t_0 < ... < t_{n_steps} = horizon.
struct TimeGrid {
  int n_steps;
  double horizon;

  TimeGrid(int steps, double t_end) : n_steps(steps), horizon(t_end) {
    if (steps < 1) throw ConfigError("time grid needs at least one step");
    if (!(t_end > 0.0)) throw ConfigError("time grid needs a positive horizon");
  }

  double dt() const { return horizon / n_steps; }
  double level(int m) const { return m * dt(); }

  TimeGrid refined(int factor = 2) const { return {n_steps * factor, horizon}; }

  /// Nearest level index for time t; |t - level| is the caller's concern.
  int nearest_level(double t) const {
    int m = static_cast<int>(std::lround(t / dt()));
    if (m < 0) m = 0;
    if (m > n_steps) m = n_steps;
    return m;
  }

  bool operator==(const TimeGrid&) const = default;
};

}  // namespace fracrd
