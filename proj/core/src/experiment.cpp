#include "fracrd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fracrd/csv.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/norms.hpp"

namespace fracrd {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_expr(const std::string& expr) {
  std::istringstream in(expr);
  std::vector<std::string> toks;
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  return toks;
}

double expr_number(const std::string& tok, const std::string& expr) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size()) throw ConfigError("bad number '" + tok + "' in '" + expr + "'");
  return v;
}

void expect_args(const std::vector<std::string>& toks, size_t n, const std::string& expr) {
  if (toks.size() != n + 1)
    throw ConfigError("'" + toks[0] + "' takes " + std::to_string(n) + " argument(s): '" + expr +
                      "'");
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

void rethrow_failure(const ReconstructionResult& res) {
  if (!res.failure) return;
  switch (*res.failure) {
    case FailureKind::Degenerate:
      throw DegenerateObservations(res.failure_message);
    case FailureKind::Stepsize:
      throw StepsizeFailure(res.failure_message);
    default:
      throw SolverFailure(res.failure_message);
  }
}

double rel_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::function<double(double)> parse_space_function(const std::string& expr) {
  const auto toks = split_expr(expr);
  if (toks.empty()) throw ConfigError("empty spatial expression");
  const std::string& head = toks[0];
  if (head == "const") {
    expect_args(toks, 1, expr);
    const double v = expr_number(toks[1], expr);
    return [v](double) { return v; };
  }
  if (head == "zero") {
    expect_args(toks, 0, expr);
    return [](double) { return 0.0; };
  }
  if (head == "affine") {
    expect_args(toks, 2, expr);
    const double a = expr_number(toks[1], expr);
    const double b = expr_number(toks[2], expr);
    return [a, b](double x) { return a + b * x; };
  }
  if (head == "gauss") {
    expect_args(toks, 4, expr);
    const double b = expr_number(toks[1], expr);
    const double amp = expr_number(toks[2], expr);
    const double c = expr_number(toks[3], expr);
    const double w = expr_number(toks[4], expr);
    if (!(w != 0.0)) throw ConfigError("gauss width must be nonzero: '" + expr + "'");
    return [b, amp, c, w](double x) {
      const double s = (x - c) / w;
      return b + amp * std::exp(-s * s);
    };
  }
  if (head == "cos_bump") {
    expect_args(toks, 0, expr);
    return [](double x) { return 0.5 * (1.0 + std::cos(std::numbers::pi * (1.0 - x))); };
  }
  if (head == "cubic_bump") {
    expect_args(toks, 0, expr);
    return [](double x) {
      const double s = 1.0 - x;
      return 1.0 - 2.0 * s * s * s + 3.0 * s * s;
    };
  }
  if (head == "one_plus_cos") {
    expect_args(toks, 0, expr);
    return [](double x) { return 1.0 + std::cos(std::numbers::pi * x); };
  }
  throw ConfigError("unknown spatial profile: '" + expr + "'");
}

std::function<double(double, double)> parse_source(const std::string& expr) {
  const auto toks = split_expr(expr);
  if (toks.empty()) throw ConfigError("empty source expression");
  const std::string& head = toks[0];
  if (head == "const") {
    expect_args(toks, 1, expr);
    const double v = expr_number(toks[1], expr);
    return [v](double, double) { return v; };
  }
  if (head == "zero") {
    expect_args(toks, 0, expr);
    return [](double, double) { return 0.0; };
  }
  if (head == "affine") {
    expect_args(toks, 2, expr);
    const double a = expr_number(toks[1], expr);
    const double b = expr_number(toks[2], expr);
    return [a, b](double, double x) { return a + b * x; };
  }
  throw ConfigError("unknown source form: '" + expr + "'");
}

BoundaryCondition parse_boundary(const std::string& expr) {
  const auto toks = split_expr(expr);
  if (toks.empty()) throw ConfigError("empty boundary expression");
  const std::string& head = toks[0];
  if (head == "neumann") {
    expect_args(toks, 1, expr);
    return BoundaryCondition::neumann(expr_number(toks[1], expr));
  }
  if (head == "dirichlet") {
    expect_args(toks, 1, expr);
    return BoundaryCondition::dirichlet(expr_number(toks[1], expr));
  }
  if (head == "dirichlet_ramp") {
    expect_args(toks, 2, expr);
    const double a = expr_number(toks[1], expr);
    const double b = expr_number(toks[2], expr);
    return BoundaryCondition::dirichlet([a, b](double t) { return a + b * t; });
  }
  if (head == "impedance") {
    expect_args(toks, 2, expr);
    const double beta = expr_number(toks[1], expr);
    return BoundaryCondition::impedance(beta, expr_number(toks[2], expr));
  }
  throw ConfigError("unknown boundary form: '" + expr + "'");
}

Experiment build_experiment(const ExperimentConfig& cfg) {
  const SpatialGrid grid{cfg.n_cells, cfg.x_min, cfg.x_max};
  const TimeGrid time_grid{cfg.n_steps, cfg.T};

  DataTemplate tmpl{cfg.alpha,
                    builtin_nonlinearity(cfg.f_name),
                    parse_space_function(cfg.diffusivity),
                    parse_space_function(cfg.potential),
                    {},
                    grid,
                    time_grid,
                    cfg.blowup_cap,
                    cfg.newton_tol,
                    cfg.newton_max_iter};
  const bool two_time = cfg.mode == "two_time_far" || cfg.mode == "two_time_near";
  tmpl.runs.push_back({parse_source(cfg.r1), parse_space_function(cfg.u0_1),
                       parse_boundary(cfg.bc1_left), parse_boundary(cfg.bc1_right)});
  if (!two_time)
    tmpl.runs.push_back({parse_source(cfg.r2), parse_space_function(cfg.u0_2),
                         parse_boundary(cfg.bc2_left), parse_boundary(cfg.bc2_right)});

  CrimeMode crime;
  if (cfg.crime == "same_grid")
    crime = CrimeMode::SameGrid;
  else if (cfg.crime == "refined2x")
    crime = CrimeMode::Refined2x;
  else
    throw ConfigError("unknown crime mode: '" + cfg.crime + "'");

  InverseOptions inv;
  inv.tol = cfg.tol;
  inv.k_max = cfg.k_max;
  inv.theta = cfg.theta;
  inv.ell_max = cfg.ell_max;
  inv.det_floor_rel = cfg.det_floor_rel;
  if (cfg.increment_form == "fixed_point")
    inv.increment_form = IncrementForm::FixedPoint;
  else if (cfg.increment_form == "discrepancy")
    inv.increment_form = IncrementForm::Discrepancy;
  else
    throw ConfigError("unknown increment form: '" + cfg.increment_form + "'");

  return Experiment{cfg,
                    std::move(tmpl),
                    two_time ? ObservationMode::TwoTime : ObservationMode::TwoRun,
                    crime,
                    parse_space_function(cfg.phantom_p),
                    parse_space_function(cfg.phantom_q),
                    inv,
                    Field::sample(grid, parse_space_function(cfg.init_p)),
                    Field::sample(grid, parse_space_function(cfg.init_q))};
}

ProblemSpec instantiate_template(const DataTemplate& tmpl, int run, const Field& p,
                                 const Field& q) {
  if (run < 0 || run >= static_cast<int>(tmpl.runs.size()))
    throw PreconditionError("run index out of range");
  const auto& rc = tmpl.runs[static_cast<size_t>(run)];
  return ProblemSpec{tmpl.alpha,
                     Field::sample(tmpl.grid, tmpl.diffusivity),
                     Field::sample(tmpl.grid, tmpl.potential),
                     tmpl.f,
                     p,
                     q,
                     rc.source,
                     Field::sample(tmpl.grid, rc.u0),
                     rc.bc_left,
                     rc.bc_right,
                     tmpl.grid,
                     tmpl.time_grid,
                     tmpl.blowup_cap,
                     tmpl.newton_tol,
                     tmpl.newton_max_iter};
}

ObservationSet experiment_observations(const Experiment& ex) {
  ObservationSet obs = generate_observations(ex.p_act, ex.q_act, ex.tmpl, ex.mode, ex.crime,
                                             ex.cfg.T1, ex.cfg.T2);
  if (ex.cfg.delta > 0.0) {
    obs.g1 = add_noise(obs.g1, ex.cfg.delta, ex.cfg.smoothing_length, ex.cfg.seed);
    obs.g2 = add_noise(obs.g2, ex.cfg.delta, ex.cfg.smoothing_length, ex.cfg.seed + 1);
  }
  return obs;
}

void run_forward(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  const Field p = Field::sample(ex.tmpl.grid, ex.p_act);
  const Field q = Field::sample(ex.tmpl.grid, ex.q_act);
  const ProblemSpec spec = instantiate_template(ex.tmpl, 0, p, q);
  const Trajectory traj = solve_ibvp(spec);
  const fs::path out(cfg.out_dir);

  {
    CsvWriter w(out / "trajectory.csv", {"t", "x", "u"});
    for (int m = 0; m < traj.n_levels(); ++m) {
      const Field& u = traj.at(m);
      for (int j = 0; j < u.size(); ++j) w.row({traj.time(m), spec.space_grid.node(j), u[j]});
    }
    w.commit();
  }

  std::optional<DecayDiagnostic> decay;
  if (cfg.steady_distance) {
    const double t_end = spec.time_grid.horizon;
    const Field r_inf =
        Field::sample(spec.space_grid, [&](double x) { return spec.source(t_end, x); });
    const SteadyProblem sp{spec.diffusivity, spec.potential,  spec.f,
                           spec.p,           spec.q,          r_inf,
                           traj.final_state(), spec.bc_left,  spec.bc_right,
                           spec.space_grid,  t_end,           cfg.newton_tol,
                           cfg.newton_max_iter};
    decay = decay_diagnostic(traj, solve_steady(sp));
  }

  std::vector<std::string> header{"t", "l2", "h1"};
  if (decay) header.push_back("steady_dist2");
  CsvWriter w(out / "summary.csv", header);
  for (int m = 0; m < traj.n_levels(); ++m) {
    const Field& u = traj.at(m);
    std::vector<double> cols{traj.time(m), l2_norm(u), sobolev_norm(u, NormOrder::H1)};
    if (decay) cols.push_back(decay->curve[static_cast<size_t>(m)].second);
    w.row(cols);
  }
  w.commit();
  if (decay) std::printf("steady decay log-log slope: %.6g\n", decay->loglog_slope);
}

void run_steady(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  const SpatialGrid& grid = ex.tmpl.grid;
  const auto& rc = ex.tmpl.runs[0];
  const double t_end = cfg.T;
  const SteadyProblem sp{Field::sample(grid, ex.tmpl.diffusivity),
                         Field::sample(grid, ex.tmpl.potential),
                         ex.tmpl.f,
                         Field::sample(grid, ex.p_act),
                         Field::sample(grid, ex.q_act),
                         Field::sample(grid, [&](double x) { return rc.source(t_end, x); }),
                         Field::sample(grid, rc.u0),
                         rc.bc_left,
                         rc.bc_right,
                         grid,
                         t_end,
                         cfg.newton_tol,
                         cfg.newton_max_iter};
  const Field u = solve_steady(sp);
  CsvWriter w(fs::path(cfg.out_dir) / "steady.csv", {"x", "u"});
  for (int j = 0; j < u.size(); ++j) w.row({grid.node(j), u[j]});
  w.commit();
}

ReconstructionResult run_invert(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  const ObservationSet obs = experiment_observations(ex);
  const InversionProblem prob = make_inversion_problem(ex.tmpl, obs, ex.p_act, ex.q_act);
  const ReconstructionResult res = reconstruct(prob, ex.init_p, ex.init_q, ex.inv_opts);

  const fs::path out(cfg.out_dir);
  {
    CsvWriter w(out / "iterates.csv",
                {"k", "mu", "misfit", "increment_norm", "rel_err_p", "rel_err_q"});
    for (const auto& it : res.iterates) {
      w.row({static_cast<double>(it.k), it.mu, it.misfit, it.increment_norm,
             rel_or_nan(it.rel_err_p), rel_or_nan(it.rel_err_q)});
      std::printf("k=%d mu=%.4g misfit=%.6g incr=%.6g rel_p=%.4g rel_q=%.4g\n", it.k, it.mu,
                  it.misfit, it.increment_norm, rel_or_nan(it.rel_err_p),
                  rel_or_nan(it.rel_err_q));
    }
    w.commit();
  }
  const auto& gt = prob.ground_truth;
  for (int k : {1, 2, 6}) {
    if (k >= static_cast<int>(res.iterates.size())) continue;
    const auto& it = res.iterates[static_cast<size_t>(k)];
    CsvWriter w(out / ("fields_" + std::to_string(k) + ".csv"),
                {"x", "p_k", "q_k", "p_act", "q_act"});
    for (int j = 0; j < it.p.size(); ++j)
      w.row({prob.grid.node(j), it.p[j], it.q[j], gt->first[j], gt->second[j]});
    w.commit();
  }

  if (res.failure)
    std::fprintf(stderr, "reconstruction stopped early: %s\n", res.failure_message.c_str());
  rethrow_failure(res);
  return res;
}

void run_sweep(const ExperimentConfig& cfg, SweepParam param) {
  const fs::path out(cfg.out_dir);

  if (param == SweepParam::Alpha) {
    const std::vector<double> alphas{0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
    struct Point {
      double p1, p6, q1, q6;
    };
    std::vector<std::future<Point>> futs;
    for (double a : alphas) {
      ExperimentConfig point_cfg = cfg;
      point_cfg.alpha = a;
      point_cfg.k_max = 6;
      point_cfg.tol = 0.0;
      futs.push_back(std::async(std::launch::async, [point_cfg]() {
        const Experiment ex = build_experiment(point_cfg);
        const ObservationSet obs = experiment_observations(ex);
        const InversionProblem prob = make_inversion_problem(ex.tmpl, obs, ex.p_act, ex.q_act);
        const ReconstructionResult res = reconstruct(prob, ex.init_p, ex.init_q, ex.inv_opts);
        rethrow_failure(res);
        if (res.iterates.size() <= 6)
          throw SolverFailure("sweep point did not reach six iterations");
        const auto& r1 = res.iterates[1];
        const auto& r6 = res.iterates[6];
        return Point{rel_or_nan(r1.rel_err_p), rel_or_nan(r6.rel_err_p),
                     rel_or_nan(r1.rel_err_q), rel_or_nan(r6.rel_err_q)};
      }));
    }
    CsvWriter w(out / "sweep_alpha.csv", {"alpha", "p_it1", "p_it6", "q_it1", "q_it6"});
    for (size_t i = 0; i < alphas.size(); ++i) {
      const Point pt = futs[i].get();
      w.row({alphas[i], pt.p1, pt.p6, pt.q1, pt.q6});
      std::printf("alpha=%.4g p_it1=%.6g p_it6=%.6g q_it1=%.6g q_it6=%.6g\n", alphas[i], pt.p1,
                  pt.p6, pt.q1, pt.q6);
    }
    w.commit();
    return;
  }

  const std::vector<double> deltas{0.03, 0.01, 0.003, 0.001};
  struct Point {
    double err_p, err_q;
  };
  std::vector<std::future<Point>> futs;
  for (size_t i = 0; i < deltas.size(); ++i) {
    ExperimentConfig point_cfg = cfg;
    point_cfg.delta = deltas[i];
    point_cfg.seed = cfg.seed + i;
    point_cfg.k_max = 10;
    point_cfg.tol = 0.0;
    futs.push_back(std::async(std::launch::async, [point_cfg]() {
      const Experiment ex = build_experiment(point_cfg);
      const ObservationSet obs = experiment_observations(ex);
      const InversionProblem prob = make_inversion_problem(ex.tmpl, obs, ex.p_act, ex.q_act);
      const ReconstructionResult res = reconstruct(prob, ex.init_p, ex.init_q, ex.inv_opts);
      rethrow_failure(res);
      const auto& last = res.iterates.back();
      return Point{rel_or_nan(last.rel_err_p), rel_or_nan(last.rel_err_q)};
    }));
  }
  std::vector<double> errs_p, errs_q;
  CsvWriter w(out / "sweep_noise.csv", {"delta", "rel_err_p", "rel_err_q"});
  for (size_t i = 0; i < deltas.size(); ++i) {
    const Point pt = futs[i].get();
    w.row({deltas[i], pt.err_p, pt.err_q});
    std::printf("delta=%.4g rel_err_p=%.6g rel_err_q=%.6g\n", deltas[i], pt.err_p, pt.err_q);
    errs_p.push_back(pt.err_p);
    errs_q.push_back(pt.err_q);
  }
  w.commit();

  const double slope_p = loglog_slope(deltas, errs_p);
  const double slope_q = loglog_slope(deltas, errs_q);
  CsvWriter ws(out / "noise_slope.csv", {"component", "slope"});
  ws.labeled_row("p", std::vector<double>{slope_p});
  ws.labeled_row("q", std::vector<double>{slope_q});
  ws.commit();
  std::printf("noise slopes: p %.4g, q %.4g\n", slope_p, slope_q);
}

ProbeReport run_probe(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  const ObservationSet obs = experiment_observations(ex);
  const InversionProblem prob = make_inversion_problem(ex.tmpl, obs, ex.p_act, ex.q_act);
  const ProbeReport report = contraction_probe(prob, prob.ground_truth->first,
                                               prob.ground_truth->second, cfg.rho,
                                               cfg.probe_samples, cfg.seed, ex.inv_opts);

  CsvWriter w(fs::path(cfg.out_dir) / "probe.csv", {"sample", "perturbation_norm", "ratio", "ok"});
  for (size_t i = 0; i < report.samples.size(); ++i) {
    const auto& s = report.samples[i];
    w.row({static_cast<double>(i), s.perturbation_norm,
           s.ok ? s.ratio : std::numeric_limits<double>::quiet_NaN(), s.ok ? 1.0 : 0.0});
  }
  w.commit();
  std::printf("probe: median ratio %.4g, worst ratio %.4g, failed %d/%zu\n", report.median,
              report.worst, report.n_failed, report.samples.size());
  return report;
}

}  // namespace fracrd
