#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"

namespace fracrd {

/// Deterministic normal sampler: mt19937_64 bits through an explicit
/// Box-Muller transform, so identical seeds give identical streams on
/// every platform.
class NormalSampler {
 public:
  explicit NormalSampler(uint64_t seed) : gen_(seed) {}

  /// Uniform in (0, 1].
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Random cosine series with 1/(1+k)^2 coefficient decay: smooth, mean-free
/// only by accident, compatible with zero-flux endpoints.
inline Field smooth_random_field(const SpatialGrid& g, NormalSampler& rng, int n_modes = 8) {
  std::vector<double> a(static_cast<size_t>(n_modes) + 1);
  for (auto& c : a) c = rng.normal();
  const double span = g.x_max - g.x_min;
  return Field::sample(g, [&](double x) {
    const double xi = (x - g.x_min) / span;
    double s = 0.0;
    for (int k = 0; k <= n_modes; ++k)
      s += a[static_cast<size_t>(k)] * std::cos(k * std::numbers::pi * xi) /
           ((1.0 + k) * (1.0 + k));
    return s;
  });
}

}  // namespace fracrd
