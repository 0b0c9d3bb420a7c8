#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "fracrd/errors.hpp"
#include "fracrd/grid.hpp"

namespace fracrd {

/// Nodal values of a scalar function on a SpatialGrid. Value semantics;
/// every arithmetic helper checks that operands share the grid.
class Field {
 public:
  explicit Field(const SpatialGrid& g, double fill = 0.0)
      : grid_(g), v_(static_cast<size_t>(g.n_nodes()), fill) {}

  Field(const SpatialGrid& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
    if (v_.size() != static_cast<size_t>(g.n_nodes()))
      throw PreconditionError("field value count does not match grid node count");
  }

  template <class F>
  static Field sample(const SpatialGrid& g, F&& f) {
    Field out(g);
    for (int j = 0; j < g.n_nodes(); ++j) out[j] = f(g.node(j));
    return out;
  }

  const SpatialGrid& grid() const { return grid_; }
  int size() const { return static_cast<int>(v_.size()); }

  double operator[](int j) const { return v_[static_cast<size_t>(j)]; }
  double& operator[](int j) { return v_[static_cast<size_t>(j)]; }

  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }

  double min() const { return *std::min_element(v_.begin(), v_.end()); }
  double max() const { return *std::max_element(v_.begin(), v_.end()); }

  double linf() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  /// Injection onto a coarser grid whose nodes are a subset of this one.
  Field restricted_to(const SpatialGrid& coarse) const {
    if (coarse.x_min != grid_.x_min || coarse.x_max != grid_.x_max ||
        grid_.n_cells % coarse.n_cells != 0)
      throw PreconditionError("restriction target is not a coarsening of this grid");
    const int stride = grid_.n_cells / coarse.n_cells;
    Field out(coarse);
    for (int j = 0; j < coarse.n_nodes(); ++j) out[j] = v_[static_cast<size_t>(j * stride)];
    return out;
  }

 private:
  SpatialGrid grid_;
  std::vector<double> v_;
};

inline void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("fields live on different grids");
}

inline Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (int j = 0; j < out.size(); ++j) out[j] += b[j];
  return out;
}

inline Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (int j = 0; j < out.size(); ++j) out[j] -= b[j];
  return out;
}

inline Field operator*(double s, const Field& a) {
  Field out = a;
  for (int j = 0; j < out.size(); ++j) out[j] *= s;
  return out;
}

inline Field& operator+=(Field& a, const Field& b) {
  require_same_grid(a, b);
  for (int j = 0; j < a.size(); ++j) a[j] += b[j];
  return a;
}

inline Field& operator-=(Field& a, const Field& b) {
  require_same_grid(a, b);
  for (int j = 0; j < a.size(); ++j) a[j] -= b[j];
  return a;
}

/// Nodewise product.
inline Field hadamard(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (int j = 0; j < out.size(); ++j) out[j] *= b[j];
  return out;
}

template <class F>
Field map(const Field& a, F&& f) {
  Field out = a;
  for (int j = 0; j < out.size(); ++j) out[j] = f(a[j]);
  return out;
}

}  // namespace fracrd
