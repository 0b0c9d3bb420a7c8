#pragma once

#include <cmath>
#include <functional>

#include "fracrd/boundary.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"
#include "fracrd/nonlinearity.hpp"

namespace fracrd {

/// Everything one initial-boundary value problem needs:
///   D_t^alpha u + L u = q u - p f(u) + r,   L = -(D u')' + d u,
/// with alpha in (0,1], D >= c_D > 0, d >= 0, plus one endpoint condition
/// per side. alpha = 1 degenerates to the classical parabolic problem.
struct ProblemSpec {
  double alpha;
  Field diffusivity;  // D
  Field potential;    // d
  Nonlinearity f;
  Field p;
  Field q;
  std::function<double(double, double)> source;  // r(t, x)
  Field u0;
  BoundaryCondition bc_left;
  BoundaryCondition bc_right;
  SpatialGrid space_grid;
  TimeGrid time_grid;
  double blowup_cap = 1e6;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;

  /// Throws ConfigError on structural problems and InitialDataMismatch when
  /// u0 violates active Dirichlet data at t = 0 beyond 1e-12.
  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
    for (const Field* f_ : {&diffusivity, &potential, &p, &q, &u0})
      if (!(f_->grid() == space_grid))
        throw ConfigError("problem field does not live on the problem grid");
    if (!(diffusivity.min() > 0.0)) throw ConfigError("diffusivity must be positive");
    if (potential.min() < 0.0) throw ConfigError("potential must be nonnegative");
    if (!(blowup_cap > 0.0)) throw ConfigError("blowup cap must be positive");
    check_initial_trace(bc_left, u0[0]);
    check_initial_trace(bc_right, u0[u0.size() - 1]);
  }

 private:
  static void check_initial_trace(const BoundaryCondition& bc, double trace) {
    if (bc.kind != BcKind::Dirichlet) return;
    const double a0 = bc.value_at(0.0);
    if (std::abs(trace - a0) > 1e-12 * std::max(1.0, std::abs(a0)))
      throw InitialDataMismatch("initial state violates Dirichlet data at t = 0");
  }
};

}  // namespace fracrd
