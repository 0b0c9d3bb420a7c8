#include "fracrd/forward.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fracrd/norms.hpp"

namespace fracrd {

namespace {

/// Nonlinear level system shared by the stepper (mass = L1 scale) and the
/// steady solver (mass = 0):
///   PDE rows:       mass (u - anchor) + A u - q u + p f(u) = rhs + bdata
///   Dirichlet rows: u = bdata
struct ReactionSystem {
  const TridiagonalOperator& op;
  const Field& q;
  const Field& p;
  const Nonlinearity& f;
  Field bdata;
  Field rhs;
  double mass = 0.0;
  const Field* anchor = nullptr;
};

Field system_residual(const ReactionSystem& s, const Field& u) {
  Field g = s.op.apply(u);
  const int n = u.size();
  for (int j = 0; j < n; ++j) {
    if (s.op.dirichlet_row(j)) {
      g[j] = u[j] - s.bdata[j];
    } else {
      double v = g[j] - s.bdata[j] - s.q[j] * u[j] + s.p[j] * s.f.f(u[j]) - s.rhs[j];
      if (s.mass != 0.0) v += s.mass * (u[j] - (*s.anchor)[j]);
      g[j] = v;
    }
  }
  return g;
}

void stamp_dirichlet(const ReactionSystem& s, Field& u) {
  const int last = u.size() - 1;
  if (s.op.dirichlet_row(0)) u[0] = s.bdata[0];
  if (s.op.dirichlet_row(last)) u[last] = s.bdata[last];
}

double residual_norm(const Field& g) {
  if (!g.all_finite()) return std::numeric_limits<double>::infinity();
  return g.linf();
}

/// Damped Newton: full step first, halve on residual increase, floor 1/64.
/// After convergence one guarded full step polishes the residual toward the
/// rounding floor so downstream identities hold well below the tolerance.
Field newton_solve(const ReactionSystem& s, Field u, double tol, int max_iter) {
  const int n = u.size();
  const double ref = std::max(1.0, residual_norm(s.rhs) + residual_norm(s.bdata) +
                                       (s.anchor ? s.mass * s.anchor->linf() : 0.0));
  const double tol_abs = tol * ref;
  constexpr double mu_floor = 1.0 / 64.0;

  stamp_dirichlet(s, u);
  Field g = system_residual(s, u);
  double gn = residual_norm(g);

  std::vector<double> sub(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
      super(static_cast<size_t>(n)), neg(static_cast<size_t>(n));

  auto take_step = [&](const Field& from, const Field& res) {
    for (int j = 0; j < n; ++j) {
      const auto sj = static_cast<size_t>(j);
      if (s.op.dirichlet_row(j)) {
        sub[sj] = 0.0;
        diag[sj] = 1.0;
        super[sj] = 0.0;
      } else {
        sub[sj] = s.op.sub[sj];
        super[sj] = s.op.super[sj];
        diag[sj] = s.op.diag[sj] + s.mass - s.q[j] + s.p[j] * s.f.df(from[j]);
      }
      neg[sj] = -res[j];
    }
    return Field(from.grid(), thomas_solve(sub, diag, super, neg));
  };

  int iter = 0;
  while (gn > tol_abs) {
    if (++iter > max_iter)
      throw NewtonDivergence("Newton stalled above tolerance after " +
                             std::to_string(max_iter) + " iterations");
    Field delta = take_step(u, g);
    double mu = 1.0;
    while (true) {
      Field trial = u;
      for (int j = 0; j < n; ++j) trial[j] += mu * delta[j];
      stamp_dirichlet(s, trial);
      Field gt = system_residual(s, trial);
      const double gtn = residual_norm(gt);
      if (gtn <= gn) {
        u = std::move(trial);
        g = std::move(gt);
        gn = gtn;
        break;
      }
      mu *= 0.5;
      if (mu < mu_floor * (1.0 - 1e-12))
        throw NewtonDivergence("Newton residual increased at every damping level");
    }
  }

  if (gn > 0.0) {
    Field delta = take_step(u, g);
    Field trial = u;
    for (int j = 0; j < n; ++j) trial[j] += delta[j];
    stamp_dirichlet(s, trial);
    if (residual_norm(system_residual(s, trial)) < gn) u = std::move(trial);
  }
  return u;
}

}  // namespace

Trajectory solve_ibvp(const ProblemSpec& spec) {
  spec.validate();
  const TridiagonalOperator op =
      assemble(spec.diffusivity, spec.potential, spec.space_grid, spec.bc_left, spec.bc_right);
  const L1Weights w = l1_weights(spec.alpha, spec.time_grid.dt(), spec.time_grid.n_steps);

  Trajectory traj{spec, {}};
  traj.states.reserve(static_cast<size_t>(spec.time_grid.n_steps) + 1);
  traj.states.push_back(spec.u0);

  for (int m = 1; m <= spec.time_grid.n_steps; ++m) {
    const double t = spec.time_grid.level(m);
    Field anchor = l1_history_anchor(traj.states, m, w);
    ReactionSystem sys{op,
                       spec.q,
                       spec.p,
                       spec.f,
                       op.boundary_rhs(spec.bc_left.value_at(t), spec.bc_right.value_at(t)),
                       Field::sample(spec.space_grid, [&](double x) { return spec.source(t, x); }),
                       w.scale,
                       &anchor};
    Field u = newton_solve(sys, traj.states.back(), spec.newton_tol, spec.newton_max_iter);
    if (!u.all_finite()) throw NewtonDivergence("non-finite state after Newton solve");
    if (u.linf() > spec.blowup_cap)
      throw BlowUp("state exceeded the sup-norm cap at t = " + std::to_string(t));
    traj.states.push_back(std::move(u));
  }
  return traj;
}

Field caputo_at_time(const Trajectory& traj, int m) {
  if (m < 1 || m >= traj.n_levels())
    throw PreconditionError("memory value needs a level in 1..n_steps");
  const L1Weights w =
      l1_weights(traj.spec.alpha, traj.spec.time_grid.dt(), traj.spec.time_grid.n_steps);
  return caputo_value(traj.states, m, w);
}

Field solve_steady(const SteadyProblem& sp) {
  const TridiagonalOperator op =
      assemble(sp.diffusivity, sp.potential, sp.grid, sp.bc_left, sp.bc_right);
  ReactionSystem sys{op,
                     sp.q,
                     sp.p,
                     sp.f,
                     op.boundary_rhs(sp.bc_left.value_at(sp.data_time),
                                     sp.bc_right.value_at(sp.data_time)),
                     sp.r_inf,
                     0.0,
                     nullptr};
  Field u = newton_solve(sys, sp.u_init, sp.newton_tol, sp.newton_max_iter);
  if (!u.all_finite()) throw NewtonDivergence("non-finite steady state");
  return u;
}

DecayDiagnostic decay_diagnostic(const Trajectory& traj, const Field& u_inf) {
  DecayDiagnostic out;
  out.curve.reserve(static_cast<size_t>(traj.n_levels()));
  for (int m = 0; m < traj.n_levels(); ++m) {
    const double d = sobolev_norm(traj.at(m) - u_inf, NormOrder::H1);
    out.curve.emplace_back(traj.time(m), d * d);
  }

  // Log-log fit over the last decade of time.
  const double t_end = out.curve.back().first;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int k = 0;
  for (const auto& [t, d2] : out.curve) {
    if (t < 0.1 * t_end || d2 <= 0.0) continue;
    const double lx = std::log(t), ly = std::log(d2);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  const double denom = k * sxx - sx * sx;
  out.loglog_slope = (k >= 2 && denom != 0.0)
                         ? (k * sxy - sx * sy) / denom
                         : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace fracrd
