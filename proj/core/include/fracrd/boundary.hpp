#pragma once

#include <functional>
#include <utility>

namespace fracrd {

enum class BcKind { Dirichlet, Neumann, Impedance };

/// One endpoint condition with time-dependent data a(t):
///   Dirichlet   u = a
///   Neumann     du/dnu = a              (outward normal)
///   Impedance   du/dnu + beta * u = a
struct BoundaryCondition {
  BcKind kind = BcKind::Neumann;
  std::function<double(double)> data = [](double) { return 0.0; };
  double beta = 0.0;

  double value_at(double t) const { return data(t); }

  static BoundaryCondition dirichlet(double a) {
    return {BcKind::Dirichlet, [a](double) { return a; }, 0.0};
  }
  static BoundaryCondition dirichlet(std::function<double(double)> a) {
    return {BcKind::Dirichlet, std::move(a), 0.0};
  }
  static BoundaryCondition neumann(double a = 0.0) {
    return {BcKind::Neumann, [a](double) { return a; }, 0.0};
  }
  static BoundaryCondition neumann(std::function<double(double)> a) {
    return {BcKind::Neumann, std::move(a), 0.0};
  }
  static BoundaryCondition impedance(double beta, double a = 0.0) {
    return {BcKind::Impedance, [a](double) { return a; }, beta};
  }
};

}  // namespace fracrd
