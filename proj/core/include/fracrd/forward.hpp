#pragma once

#include <utility>
#include <vector>

#include "fracrd/caputo.hpp"
#include "fracrd/problem.hpp"
#include "fracrd/tridiagonal.hpp"

namespace fracrd {

/// Complete time history of one initial-boundary value solve.
struct Trajectory {
  ProblemSpec spec;
  std::vector<Field> states;  // levels 0..n_steps

  const Field& at(int m) const { return states[static_cast<size_t>(m)]; }
  const Field& final_state() const { return states.back(); }
  double time(int m) const { return spec.time_grid.level(m); }
  int n_levels() const { return static_cast<int>(states.size()); }
};

/// Fully implicit L1 stepping of
///   scale (u^m - anchor) + L u^m - q u^m + p f(u^m) = r(t_m) + boundary data,
/// one damped Newton solve per level. Throws NewtonDivergence, BlowUp,
/// SingularOperator, InitialDataMismatch.
Trajectory solve_ibvp(const ProblemSpec& spec);

/// L1 memory value of the stored history at level m >= 1.
Field caputo_at_time(const Trajectory& traj, int m);

/// Steady problem: the same reaction balance with the memory term removed.
struct SteadyProblem {
  Field diffusivity;
  Field potential;
  Nonlinearity f;
  Field p;
  Field q;
  Field r_inf;
  Field u_init;  // Newton starting point
  BoundaryCondition bc_left;
  BoundaryCondition bc_right;
  SpatialGrid grid;
  double data_time = 0.0;  // where time-dependent boundary data is sampled
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
};

/// Newton solve of L u - q u + p f(u) = r_inf (+ boundary data).
Field solve_steady(const SteadyProblem& sp);

/// Squared-H1 distance to u_inf at every level, plus the log-log slope of
/// that curve fitted over the last decade of time.
struct DecayDiagnostic {
  std::vector<std::pair<double, double>> curve;  // (t_m, ||u^m - u_inf||_{H1}^2)
  double loglog_slope = 0.0;
};

DecayDiagnostic decay_diagnostic(const Trajectory& traj, const Field& u_inf);

}  // namespace fracrd
