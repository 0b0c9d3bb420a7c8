#pragma once

#include <cmath>
#include <utility>

#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"

namespace fracrd {

/// Gaussian bump on a constant base; the reconstruction targets.
inline double gaussian_bump(double x, double base, double amplitude, double center,
                            double width) {
  const double s = (x - center) / width;
  return base + amplitude * std::exp(-s * s);
}

/// Target absorption coefficient: 0.15 + exp(-((x-0.5)/0.1)^2).
inline double phantom_p(double x) { return gaussian_bump(x, 0.15, 1.0, 0.5, 0.1); }

/// Target linear reaction coefficient: 0.5 + 7 exp(-((x-0.7)/0.1)^2).
inline double phantom_q(double x) { return gaussian_bump(x, 0.5, 7.0, 0.7, 0.1); }

inline std::pair<Field, Field> make_phantoms(const SpatialGrid& g) {
  return {Field::sample(g, phantom_p), Field::sample(g, phantom_q)};
}

}  // namespace fracrd
