#pragma once

#include <span>
#include <vector>

#include "fracrd/field.hpp"

namespace fracrd {

/// L1 quadrature of the Djirbashian-Caputo derivative on a uniform step dt:
///   (D_t^alpha v)(t_m) ~ scale * sum_{j=0}^{m-1} b[j] * (v^{m-j} - v^{m-j-1})
/// with b[j] = (j+1)^{1-alpha} - j^{1-alpha} and scale = dt^{-alpha}/Gamma(2-alpha).
/// At alpha = 1 this is exactly the backward difference: b = (1, 0, ...), scale = 1/dt.
struct L1Weights {
  double alpha;
  double dt;
  double scale;
  std::vector<double> b;
};

/// Weights for levels 1..n_steps. Requires alpha in (0,1], dt > 0, n_steps >= 1.
L1Weights l1_weights(double alpha, double dt, int n_steps);

/// L1 value at level m >= 1; history holds levels 0..m at least.
double caputo_value(std::span<const double> history, int m, const L1Weights& w);
Field caputo_value(std::span<const Field> history, int m, const L1Weights& w);

/// Anchor A such that the L1 value at level m equals scale * (v^m - A).
/// The implicit step solves against this fixed part of the memory sum.
double l1_history_anchor(std::span<const double> history, int m, const L1Weights& w);
Field l1_history_anchor(std::span<const Field> history, int m, const L1Weights& w);

}  // namespace fracrd
