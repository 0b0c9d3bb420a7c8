#pragma once

#include <functional>
#include <string>

#include "fracrd/config.hpp"
#include "fracrd/inverse.hpp"
#include "fracrd/synthetic.hpp"

namespace fracrd {

/// A fully resolved experiment: the config's expression strings turned into
/// callables, plus the observation layout, the exact coefficients, and the
/// iteration settings the drivers share.
struct Experiment {
  ExperimentConfig cfg;
  DataTemplate tmpl;
  ObservationMode mode;
  CrimeMode crime;
  std::function<double(double)> p_act;
  std::function<double(double)> q_act;
  InverseOptions inv_opts;
  Field init_p;
  Field init_q;
};

/// Small spatial expression forms:
///   "const v"        v
///   "zero"           0
///   "affine a b"     a + b x
///   "gauss b A c w"  b + A exp(-((x - c) / w)^2)
///   "cos_bump"       (1 + cos(pi (1 - x))) / 2
///   "cubic_bump"     1 - 2 (1 - x)^3 + 3 (1 - x)^2
///   "one_plus_cos"   1 + cos(pi x)
/// Throws ConfigError on anything else.
std::function<double(double)> parse_space_function(const std::string& expr);

/// Time-independent source forms: "const v", "zero", "affine a b".
std::function<double(double, double)> parse_source(const std::string& expr);

/// Endpoint condition forms: "neumann a", "dirichlet a",
/// "dirichlet_ramp a b" (data a + b t), "impedance beta a".
BoundaryCondition parse_boundary(const std::string& expr);

Experiment build_experiment(const ExperimentConfig& cfg);

/// Instantiates one run of the template at given coefficients, sampling all
/// callables on the template's own grids.
ProblemSpec instantiate_template(const DataTemplate& tmpl, int run, const Field& p,
                                 const Field& q);

/// Synthetic observations for the experiment, with noise applied when the
/// config asks for it (the two snapshots use seed and seed + 1).
ObservationSet experiment_observations(const Experiment& ex);

/// Solves run 1 at the exact coefficients; writes trajectory.csv (t, x, u
/// over every level and node) and summary.csv (t, l2, h1 per level, plus the
/// squared H1 distance to the steady state when the config requests it).
void run_forward(const ExperimentConfig& cfg);

/// Solves the steady problem of run 1 at the exact coefficients with the
/// source and boundary data frozen at the final time; writes steady.csv.
void run_steady(const ExperimentConfig& cfg);

/// Full pipeline: synthetic data, reconstruction from the configured start,
/// iterates.csv (k, mu, misfit, increment_norm, rel_err_p, rel_err_q) and
/// fields_<k>.csv (x, p_k, q_k, p_act, q_act) for k in {1, 2, 6}. A recorded
/// failure is rethrown after the files are written.
ReconstructionResult run_invert(const ExperimentConfig& cfg);

enum class SweepParam { Alpha, Noise };

/// Alpha: reruns the experiment at alpha in {0.5, 0.6, 0.7, 0.8, 0.9, 0.99}
/// with six iterations and writes sweep_alpha.csv (alpha, p_it1, p_it6,
/// q_it1, q_it6). Noise: reruns at delta in {0.03, 0.01, 0.003, 0.001} with
/// ten iterations, seeding realization i with seed + i, and writes
/// sweep_noise.csv (delta, rel_err_p, rel_err_q) plus noise_slope.csv with
/// the fitted log-log slope per component.
void run_sweep(const ExperimentConfig& cfg, SweepParam param);

/// Contraction study around the exact coefficients; writes probe.csv
/// (sample, perturbation_norm, ratio, ok) and returns the report.
ProbeReport run_probe(const ExperimentConfig& cfg);

}  // namespace fracrd
