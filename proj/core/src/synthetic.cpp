#include "fracrd/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "fracrd/norms.hpp"
#include "fracrd/random.hpp"

namespace fracrd {

namespace {

ProblemSpec data_spec(const DataTemplate& tmpl, const DataTemplate::Run& run,
                      const std::function<double(double)>& p_act,
                      const std::function<double(double)>& q_act, const SpatialGrid& grid,
                      const TimeGrid& tgrid) {
  return ProblemSpec{tmpl.alpha,
                     Field::sample(grid, tmpl.diffusivity),
                     Field::sample(grid, tmpl.potential),
                     tmpl.f,
                     Field::sample(grid, p_act),
                     Field::sample(grid, q_act),
                     run.source,
                     Field::sample(grid, run.u0),
                     run.bc_left,
                     run.bc_right,
                     grid,
                     tgrid,
                     tmpl.blowup_cap,
                     tmpl.newton_tol,
                     tmpl.newton_max_iter};
}

int snapped_level(const TimeGrid& tg, double t, const char* label) {
  const int m = tg.nearest_level(t);
  if (std::abs(tg.level(m) - t) > 1e-9 * tg.horizon)
    std::fprintf(stderr, "warning: %s = %g snapped to time level %d (t = %g)\n", label, t, m,
                 tg.level(m));
  if (m < 1) throw ConfigError("observation time must be at least one step after t = 0");
  return m;
}

}  // namespace

ObservationSet generate_observations(const std::function<double(double)>& p_act,
                                     const std::function<double(double)>& q_act,
                                     const DataTemplate& tmpl, ObservationMode mode,
                                     CrimeMode crime, double t1, double t2) {
  const int factor = (crime == CrimeMode::Refined2x) ? 2 : 1;
  const SpatialGrid fine = (factor == 1) ? tmpl.grid : tmpl.grid.refined(factor);
  const TimeGrid fine_t = (factor == 1) ? tmpl.time_grid : tmpl.time_grid.refined(factor);

  if (mode == ObservationMode::TwoRun) {
    if (tmpl.runs.size() != 2) throw ConfigError("two-run observations need two run conditions");
    const double T = tmpl.time_grid.horizon;
    Field g1 = solve_ibvp(data_spec(tmpl, tmpl.runs[0], p_act, q_act, fine, fine_t))
                   .final_state()
                   .restricted_to(tmpl.grid);
    Field g2 = solve_ibvp(data_spec(tmpl, tmpl.runs[1], p_act, q_act, fine, fine_t))
                   .final_state()
                   .restricted_to(tmpl.grid);
    return {ObservationMode::TwoRun, std::move(g1), std::move(g2), T, T};
  }

  if (tmpl.runs.size() != 1) throw ConfigError("two-time observations need one run condition");
  if (!(t1 > 0.0) || !(t2 > t1) || t2 > tmpl.time_grid.horizon)
    throw ConfigError("two-time observations need 0 < t1 < t2 <= horizon");
  const int m1 = snapped_level(tmpl.time_grid, t1, "t1");
  const int m2 = snapped_level(tmpl.time_grid, t2, "t2");
  if (m1 == m2) throw ConfigError("observation times snap to the same level");
  const Trajectory traj = solve_ibvp(data_spec(tmpl, tmpl.runs[0], p_act, q_act, fine, fine_t));
  Field g1 = traj.at(factor * m1).restricted_to(tmpl.grid);
  Field g2 = traj.at(factor * m2).restricted_to(tmpl.grid);
  return {ObservationMode::TwoTime, std::move(g1), std::move(g2), tmpl.time_grid.level(m1),
          tmpl.time_grid.level(m2)};
}

InversionProblem make_inversion_problem(const DataTemplate& tmpl, const ObservationSet& obs,
                                        const std::function<double(double)>& p_act,
                                        const std::function<double(double)>& q_act) {
  InversionProblem prob{tmpl.alpha,
                        tmpl.f,
                        Field::sample(tmpl.grid, tmpl.diffusivity),
                        Field::sample(tmpl.grid, tmpl.potential),
                        {},
                        tmpl.grid,
                        tmpl.time_grid,
                        obs,
                        std::make_pair(Field::sample(tmpl.grid, p_act),
                                       Field::sample(tmpl.grid, q_act)),
                        tmpl.blowup_cap,
                        tmpl.newton_tol,
                        tmpl.newton_max_iter};
  prob.runs.reserve(tmpl.runs.size());
  for (const auto& run : tmpl.runs)
    prob.runs.push_back(
        RunConditions{run.source, Field::sample(tmpl.grid, run.u0), run.bc_left, run.bc_right});
  return prob;
}

Field add_noise(const Field& g, double delta, double smoothing_length, uint64_t seed) {
  if (delta < 0.0) throw ConfigError("noise level must be nonnegative");
  if (delta == 0.0) return g;
  const SpatialGrid& grid = g.grid();
  const double s = (smoothing_length > 0.0) ? smoothing_length : 2.0 * grid.h();

  NormalSampler rng(seed);
  Field eta(grid);
  for (int j = 0; j < eta.size(); ++j) eta[j] = rng.normal();

  // (I - s^2 Lap)^2 eta_s = eta with zero-flux rows: two solves with the
  // same Helmholtz operator.
  const TridiagonalOperator helm =
      assemble(Field(grid, s * s), Field(grid, 1.0), grid, BoundaryCondition::neumann(0.0),
               BoundaryCondition::neumann(0.0));
  Field eta_s = helm.solve(helm.solve(eta));

  const double target = delta * sobolev_norm(g, NormOrder::H2);
  const double got = sobolev_norm(eta_s, NormOrder::H2);
  if (!(got > 0.0)) throw SolverFailure("smoothed noise vanished");
  return g + (target / got) * eta_s;
}

double relative_error(const Field& rec, const Field& act) {
  const double ref = sobolev_norm(act, NormOrder::L2);
  if (!(ref > 0.0)) throw PreconditionError("relative error against a zero reference");
  return sobolev_norm(rec - act, NormOrder::L2) / ref;
}

}  // namespace fracrd
