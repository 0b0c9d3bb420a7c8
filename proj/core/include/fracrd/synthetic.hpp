#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fracrd/inverse.hpp"

namespace fracrd {

/// SameGrid solves the data on the inversion grid itself (useful for exact
/// consistency checks); Refined2x doubles both resolutions for the data
/// solve and restricts by injection, so the inversion never sees its own
/// discretization.
enum class CrimeMode { SameGrid, Refined2x };

/// Coefficient-free experiment description kept as callables so the data
/// solve can sample them on a finer grid than the inversion uses.
struct DataTemplate {
  double alpha;
  Nonlinearity f;
  std::function<double(double)> diffusivity;
  std::function<double(double)> potential;
  struct Run {
    std::function<double(double, double)> source;
    std::function<double(double)> u0;
    BoundaryCondition bc_left;
    BoundaryCondition bc_right;
  };
  std::vector<Run> runs;  // 2 for TwoRun, 1 for TwoTime
  SpatialGrid grid;       // inversion resolution
  TimeGrid time_grid;
  double blowup_cap = 1e6;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
};

/// Solves the forward problem(s) at the exact coefficients and samples the
/// observations. TwoTime snaps t1, t2 to the nearest inversion time levels
/// (warning on stderr when they do not land exactly).
ObservationSet generate_observations(const std::function<double(double)>& p_act,
                                     const std::function<double(double)>& q_act,
                                     const DataTemplate& tmpl, ObservationMode mode,
                                     CrimeMode crime, double t1 = -1.0, double t2 = -1.0);

/// Inversion template on the inversion grid, with the exact coefficients
/// attached as ground truth for error reporting.
InversionProblem make_inversion_problem(const DataTemplate& tmpl, const ObservationSet& obs,
                                        const std::function<double(double)>& p_act,
                                        const std::function<double(double)>& q_act);

/// Adds H2-calibrated smooth noise: i.i.d. normal node values pushed through
/// two solves of (I - s^2 Lap) with zero-flux rows, then rescaled so the
/// perturbation's H2 norm is delta times the H2 norm of g. A nonpositive
/// smoothing_length means s = 2h. delta = 0 returns g unchanged.
Field add_noise(const Field& g, double delta, double smoothing_length, uint64_t seed);

/// ||rec - act||_L2 / ||act||_L2. Throws PreconditionError when act is zero.
double relative_error(const Field& rec, const Field& act);

}  // namespace fracrd
