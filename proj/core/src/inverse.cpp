#include "fracrd/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "fracrd/norms.hpp"
#include "fracrd/random.hpp"
#include "fracrd/synthetic.hpp"

namespace fracrd {

ProblemSpec InversionProblem::instantiate(int run, const Field& p, const Field& q) const {
  const RunConditions& rc = runs.at(static_cast<size_t>(run));
  return ProblemSpec{alpha,   diffusivity, potential, f,         p,
                     q,       rc.source,   rc.u0,     rc.bc_left, rc.bc_right,
                     grid,    time_grid,   blowup_cap, newton_tol, newton_max_iter};
}

std::vector<TridiagonalOperator> InversionProblem::assemble_operators() const {
  std::vector<TridiagonalOperator> ops;
  ops.reserve(runs.size());
  for (const auto& run : runs)
    ops.push_back(assemble(diffusivity, potential, grid, run.bc_left, run.bc_right));
  return ops;
}

std::pair<int, int> InversionProblem::observation_levels() const {
  if (obs.mode == ObservationMode::TwoRun) return {time_grid.n_steps, time_grid.n_steps};
  return {time_grid.nearest_level(obs.t1), time_grid.nearest_level(obs.t2)};
}

Field determinant_field(const Field& g1, const Field& g2, const Nonlinearity& f) {
  require_same_grid(g1, g2);
  Field out(g1.grid());
  for (int j = 0; j < out.size(); ++j) out[j] = g2[j] * f.f(g1[j]) - g1[j] * f.f(g2[j]);
  return out;
}

SafeReciprocal safe_reciprocal(const Field& det, double floor_eps) {
  if (!(floor_eps > 0.0)) throw PreconditionError("determinant floor must be positive");
  SafeReciprocal out{Field(det.grid()), std::vector<uint8_t>(static_cast<size_t>(det.size()), 0),
                     0};
  for (int j = 0; j < det.size(); ++j) {
    const double d = det[j];
    const double mag = std::abs(d);
    if (mag < floor_eps) {
      out.clamped[static_cast<size_t>(j)] = 1;
      ++out.n_clamped;
      out.inv[j] = (d < 0.0 ? -1.0 : 1.0) / floor_eps;
    } else {
      out.inv[j] = 1.0 / d;
    }
  }
  if (5 * out.n_clamped > det.size())
    throw DegenerateObservations("determinant clamped on more than 20% of nodes");
  return out;
}

Field observation_residual(const Trajectory& traj, const TridiagonalOperator& op, const Field& g,
                           int m) {
  require_same_grid(traj.spec.u0, g);
  const double t = traj.time(m);
  Field res = caputo_at_time(traj, m);
  const Field r = Field::sample(traj.spec.space_grid,
                                [&](double x) { return traj.spec.source(t, x); });
  const Field bdata =
      op.boundary_rhs(traj.spec.bc_left.value_at(t), traj.spec.bc_right.value_at(t));
  res -= r;
  res += op.apply(g);
  res -= bdata;
  return res;
}

Field residual_two_run(const Trajectory& traj, const TridiagonalOperator& op, const Field& g) {
  return observation_residual(traj, op, g, traj.spec.time_grid.n_steps);
}

Field residual_two_time(const Trajectory& traj, const TridiagonalOperator& op, const Field& g,
                        int m) {
  return observation_residual(traj, op, g, m);
}

namespace {

/// Cramer solve of [g, -f(g); ...] (q; p)^T = res per node, as increments
/// against reference values of p and q when those are given.
struct Elimination {
  Field p;
  Field q;
  int n_clamped;
};

Elimination eliminate(const Field& res1, const Field& res2, const Field& g1, const Field& g2,
                      const Nonlinearity& f, double floor_eps) {
  const Field det = determinant_field(g1, g2, f);
  const SafeReciprocal inv = safe_reciprocal(det, floor_eps);
  Field p(g1.grid()), q(g1.grid());
  for (int j = 0; j < p.size(); ++j) {
    p[j] = inv.inv[j] * (g1[j] * res2[j] - g2[j] * res1[j]);
    q[j] = inv.inv[j] * (f.f(g1[j]) * res2[j] - f.f(g2[j]) * res1[j]);
  }
  return {std::move(p), std::move(q), inv.n_clamped};
}

/// Boundary nodes where any run carries Dirichlet data have no usable PDE
/// row in the elimination; copy the nearest interior value there.
void extend_at_dirichlet(const std::vector<TridiagonalOperator>& ops, Field& v) {
  const int last = v.size() - 1;
  for (const auto& op : ops) {
    if (op.dirichlet_row(0)) v[0] = v[1];
    if (op.dirichlet_row(last)) v[last] = v[last - 1];
  }
}

double observation_misfit(const InversionProblem& prob, const std::vector<Trajectory>& trajs) {
  const auto [m1, m2] = prob.observation_levels();
  if (prob.obs.mode == ObservationMode::TwoRun)
    return l2_norm(trajs[0].final_state() - prob.obs.g1) +
           l2_norm(trajs[1].final_state() - prob.obs.g2);
  return l2_norm(trajs[0].at(m1) - prob.obs.g1) + l2_norm(trajs[0].at(m2) - prob.obs.g2);
}

std::vector<Trajectory> solve_runs(const InversionProblem& prob, const Field& p, const Field& q) {
  std::vector<Trajectory> trajs;
  trajs.reserve(prob.runs.size());
  for (size_t i = 0; i < prob.runs.size(); ++i)
    trajs.push_back(solve_ibvp(prob.instantiate(static_cast<int>(i), p, q)));
  return trajs;
}

}  // namespace

std::pair<Field, Field> fixed_point_map(const Field& res1, const Field& res2, const Field& g1,
                                        const Field& g2, const Nonlinearity& f,
                                        double floor_eps) {
  Elimination e = eliminate(res1, res2, g1, g2, f, floor_eps);
  return {std::move(e.p), std::move(e.q)};
}

StepChoice step_size(const std::function<double(double)>& trial_misfit, double current_misfit,
                     double theta, int ell_max) {
  if (!(theta > 0.0) || theta >= 1.0) throw PreconditionError("theta must lie in (0, 1)");
  for (int ell = 0; ell <= ell_max; ++ell) {
    const double mu = std::pow(theta, ell);
    const double m = trial_misfit(mu);
    if (std::isfinite(m) && m <= current_misfit) return {mu, m};
  }
  throw StepsizeFailure("no monotone step size down to theta^ell_max");
}

double step_size(const std::function<double(const Field&, const Field&)>& misfit_fn,
                 const std::pair<Field, Field>& current, const std::pair<Field, Field>& increment,
                 double theta, int ell_max) {
  const double base = misfit_fn(current.first, current.second);
  auto trial = [&](double mu) {
    Field p = current.first;
    Field q = current.second;
    for (int j = 0; j < p.size(); ++j) {
      p[j] += mu * increment.first[j];
      q[j] += mu * increment.second[j];
    }
    return misfit_fn(p, q);
  };
  return step_size(trial, base, theta, ell_max).mu;
}

MapEvaluation evaluate_update_map(const InversionProblem& prob,
                                  const std::vector<TridiagonalOperator>& ops, const Field& p,
                                  const Field& q, const InverseOptions& opts,
                                  std::vector<Trajectory>* reuse) {
  std::vector<Trajectory> trajs =
      (reuse != nullptr) ? std::move(*reuse) : solve_runs(prob, p, q);

  const auto [m1, m2] = prob.observation_levels();
  const Field& g1 = prob.obs.g1;
  const Field& g2 = prob.obs.g2;
  Field res1 = (prob.obs.mode == ObservationMode::TwoRun)
                   ? residual_two_run(trajs[0], ops[0], g1)
                   : residual_two_time(trajs[0], ops[0], g1, m1);
  Field res2 = (prob.obs.mode == ObservationMode::TwoRun)
                   ? residual_two_run(trajs[1], ops[1], g2)
                   : residual_two_time(trajs[0], ops[0], g2, m2);

  const Field det = determinant_field(g1, g2, prob.f);
  const double det_max = det.linf();
  if (!(det_max > 0.0)) throw DegenerateObservations("observation determinant vanishes");
  const double floor_eps = opts.det_floor_rel * det_max;

  MapEvaluation ev{Field(prob.grid), Field(prob.grid), observation_misfit(prob, trajs), 0, {}};

  if (opts.increment_form == IncrementForm::FixedPoint) {
    Elimination e = eliminate(res1, res2, g1, g2, prob.f, floor_eps);
    ev.n_clamped = e.n_clamped;
    Field tp = std::move(e.p);
    Field tq = std::move(e.q);
    extend_at_dirichlet(ops, tp);
    extend_at_dirichlet(ops, tq);
    ev.incr_p = tp - p;
    ev.incr_q = tq - q;
  } else {
    // Same increment without re-deriving (p, q): subtract the identity
    // q g - p f(g) = res that the current coefficients satisfy exactly.
    auto dsc = [&](const TridiagonalOperator& op, const Field& uT, const Field& g) {
      Field diff = uT - g;
      Field out = op.apply(diff);
      for (int j = 0; j < out.size(); ++j)
        out[j] = q[j] * diff[j] - out[j] - p[j] * (prob.f.f(uT[j]) - prob.f.f(g[j]));
      return out;
    };
    const bool two_run = prob.obs.mode == ObservationMode::TwoRun;
    const Field& u1 = two_run ? trajs[0].final_state() : trajs[0].at(m1);
    const Field& u2 = two_run ? trajs[1].final_state() : trajs[0].at(m2);
    Field d1 = dsc(ops[0], u1, g1);
    Field d2 = dsc(two_run ? ops[1] : ops[0], u2, g2);
    Elimination e = eliminate(d1, d2, g1, g2, prob.f, floor_eps);
    ev.n_clamped = e.n_clamped;
    ev.incr_p = std::move(e.p);
    ev.incr_q = std::move(e.q);
    extend_at_dirichlet(ops, ev.incr_p);
    extend_at_dirichlet(ops, ev.incr_q);
  }
  ev.trajectories = std::move(trajs);
  return ev;
}

ReconstructionResult reconstruct(const InversionProblem& prob, const Field& p0, const Field& q0,
                                 const InverseOptions& opts) {
  ReconstructionResult result;
  const std::vector<TridiagonalOperator> ops = prob.assemble_operators();
  Field p = p0;
  Field q = q0;

  auto record = [&](int k, double mu, const MapEvaluation& ev) {
    IterateRecord rec{k, p, q, mu, ev.misfit, combined_l2(ev.incr_p, ev.incr_q), {}, {}};
    if (prob.ground_truth) {
      rec.rel_err_p = relative_error(p, prob.ground_truth->first);
      rec.rel_err_q = relative_error(q, prob.ground_truth->second);
    }
    result.iterates.push_back(std::move(rec));
  };

  auto fail = [&](FailureKind kind, const std::string& msg) {
    result.failure = kind;
    result.failure_message = msg;
  };

  std::optional<MapEvaluation> ev;
  try {
    ev = evaluate_update_map(prob, ops, p, q, opts);
  } catch (const DegenerateObservations& e) {
    fail(FailureKind::Degenerate, e.what());
    return result;
  } catch (const SolverFailure& e) {
    fail(FailureKind::Solver, e.what());
    return result;
  }
  record(0, 1.0, *ev);

  int k = 0;
  while (k < opts.k_max && result.iterates.back().increment_norm > opts.tol) {
    try {
      std::vector<Trajectory> accepted;
      auto trial = [&](double mu) {
        Field tp = p;
        Field tq = q;
        for (int j = 0; j < tp.size(); ++j) {
          tp[j] += mu * ev->incr_p[j];
          tq[j] += mu * ev->incr_q[j];
        }
        // An unsolvable trial is a rejected step, not a failed run.
        std::vector<Trajectory> trajs;
        try {
          trajs = solve_runs(prob, tp, tq);
        } catch (const SolverFailure&) {
          return std::numeric_limits<double>::infinity();
        }
        const double m = observation_misfit(prob, trajs);
        accepted = std::move(trajs);
        return m;
      };
      const StepChoice step = step_size(trial, ev->misfit, opts.theta, opts.ell_max);
      for (int j = 0; j < p.size(); ++j) {
        p[j] += step.mu * ev->incr_p[j];
        q[j] += step.mu * ev->incr_q[j];
      }
      ++k;
      ev = evaluate_update_map(prob, ops, p, q, opts, &accepted);
      record(k, step.mu, *ev);
    } catch (const DegenerateObservations& e) {
      fail(FailureKind::Degenerate, e.what());
      break;
    } catch (const StepsizeFailure& e) {
      fail(FailureKind::Stepsize, e.what());
      break;
    } catch (const SolverFailure& e) {
      fail(FailureKind::Solver, e.what());
      break;
    }
  }
  return result;
}

ProbeReport contraction_probe(const InversionProblem& prob, const Field& p_act,
                              const Field& q_act, double rho, int n_samples, uint64_t seed,
                              const InverseOptions& opts) {
  if (!(rho > 0.0)) throw PreconditionError("probe radius must be positive");
  const std::vector<TridiagonalOperator> ops = prob.assemble_operators();
  NormalSampler rng(seed);
  ProbeReport report;
  report.samples.reserve(static_cast<size_t>(n_samples));

  for (int i = 0; i < n_samples; ++i) {
    Field dp = smooth_random_field(prob.grid, rng);
    Field dq = smooth_random_field(prob.grid, rng);
    const double target = rho * (0.1 + 0.9 * rng.uniform01());
    const double raw = combined_l2(dp, dq);
    const double s = (raw > 0.0) ? target / raw : 0.0;
    dp = s * dp;
    dq = s * dq;

    ProbeSample sample{combined_l2(dp, dq), 0.0, true, {}};
    try {
      const Field p = p_act + dp;
      const Field q = q_act + dq;
      InverseOptions probe_opts = opts;
      probe_opts.increment_form = IncrementForm::FixedPoint;
      MapEvaluation ev = evaluate_update_map(prob, ops, p, q, probe_opts);
      const Field tp = p + ev.incr_p;
      const Field tq = q + ev.incr_q;
      sample.ratio = combined_l2(tp - p_act, tq - q_act) / sample.perturbation_norm;
    } catch (const std::exception& e) {
      sample.ok = false;
      sample.error = e.what();
      ++report.n_failed;
    }
    report.samples.push_back(std::move(sample));
  }

  std::vector<double> ratios;
  for (const auto& s : report.samples)
    if (s.ok) ratios.push_back(s.ratio);
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    report.worst = ratios.back();
    report.median = ratios[ratios.size() / 2];
  }
  return report;
}

}  // namespace fracrd
