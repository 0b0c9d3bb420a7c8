#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracrd/forward.hpp"
#include "fracrd/nonlinearity.hpp"
#include "fracrd/problem.hpp"
#include "fracrd/tridiagonal.hpp"

namespace fracrd {

enum class ObservationMode { TwoRun, TwoTime };

/// Interior snapshots driving the reconstruction. TwoRun: one state per
/// source at the common final time (t1 == t2). TwoTime: two states of a
/// single run at t1 < t2.
struct ObservationSet {
  ObservationMode mode;
  Field g1;
  Field g2;
  double t1;
  double t2;
};

/// Conditions that differ (or not) between the runs of one experiment.
struct RunConditions {
  std::function<double(double, double)> source;  // r(t, x)
  Field u0;
  BoundaryCondition bc_left;
  BoundaryCondition bc_right;
};

/// The inversion template: everything except the coefficients (p, q).
struct InversionProblem {
  double alpha;
  Nonlinearity f;
  Field diffusivity;
  Field potential;
  std::vector<RunConditions> runs;  // 2 for TwoRun, 1 for TwoTime
  SpatialGrid grid;
  TimeGrid time_grid;
  ObservationSet obs;
  std::optional<std::pair<Field, Field>> ground_truth;  // enables error columns
  double blowup_cap = 1e6;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;

  ProblemSpec instantiate(int run, const Field& p, const Field& q) const;

  /// One elliptic operator per run; runs may differ in boundary shape.
  std::vector<TridiagonalOperator> assemble_operators() const;

  /// Time levels carrying the two observations.
  std::pair<int, int> observation_levels() const;
};

struct IterateRecord {
  int k;
  Field p;
  Field q;
  double mu;             // step size that produced this iterate; 1 at k = 0
  double misfit;         // sum of L2 distances between solved states and data
  double increment_norm; // combined L2 norm of the proposed update
  std::optional<double> rel_err_p;
  std::optional<double> rel_err_q;
};

/// det = g2 f(g1) - g1 f(g2), the pointwise elimination determinant.
Field determinant_field(const Field& g1, const Field& g2, const Nonlinearity& f);

/// 1/det with |det| < floor_eps clamped to sign(det)/floor_eps. Throws
/// DegenerateObservations when more than 20% of the nodes clamp.
struct SafeReciprocal {
  Field inv;
  std::vector<uint8_t> clamped;
  int n_clamped = 0;
};
SafeReciprocal safe_reciprocal(const Field& det, double floor_eps);

/// PDE residual of the trajectory's own equation evaluated at level m with
/// the observed state g in place of the solved one:
///   res = (memory value at m) - r(t_m) + L g - (boundary data terms).
/// Where both coefficients are exact and g is the solved state itself, this
/// collapses to q g - p f(g) up to the Newton tolerance.
Field observation_residual(const Trajectory& traj, const TridiagonalOperator& op, const Field& g,
                           int m);

/// Final-time residual of one of the two runs.
Field residual_two_run(const Trajectory& traj, const TridiagonalOperator& op, const Field& g);

/// Residual of the single run at one of the two observation levels.
Field residual_two_time(const Trajectory& traj, const TridiagonalOperator& op, const Field& g,
                        int m);

/// Pointwise 2x2 elimination: solves q g_i - p f(g_i) = res_i per node.
std::pair<Field, Field> fixed_point_map(const Field& res1, const Field& res2, const Field& g1,
                                        const Field& g2, const Nonlinearity& f, double floor_eps);

/// Largest mu in {theta^0, ..., theta^ell_max} whose trial misfit does not
/// exceed the current one. Throws StepsizeFailure when none qualifies.
struct StepChoice {
  double mu;
  double misfit;
};
StepChoice step_size(const std::function<double(double)>& trial_misfit, double current_misfit,
                     double theta, int ell_max);

/// Convenience overload matching the update rule's natural signature.
double step_size(const std::function<double(const Field&, const Field&)>& misfit_fn,
                 const std::pair<Field, Field>& current, const std::pair<Field, Field>& increment,
                 double theta, int ell_max);

enum class IncrementForm { FixedPoint, Discrepancy };

struct InverseOptions {
  double tol = 1e-6;
  int k_max = 20;
  double theta = 0.5;
  int ell_max = 6;
  double det_floor_rel = 1e-6;  // floor_eps = det_floor_rel * max|det|
  IncrementForm increment_form = IncrementForm::FixedPoint;
};

/// One evaluation of the update map at fixed coefficients.
struct MapEvaluation {
  Field incr_p;
  Field incr_q;
  double misfit;
  int n_clamped;
  std::vector<Trajectory> trajectories;
};

/// Solves the forward run(s) at (p, q) and assembles the update direction.
/// ops holds one operator per run (assemble_operators). Passing reuse steals
/// previously solved trajectories for the same (p, q).
MapEvaluation evaluate_update_map(const InversionProblem& prob,
                                  const std::vector<TridiagonalOperator>& ops, const Field& p,
                                  const Field& q, const InverseOptions& opts,
                                  std::vector<Trajectory>* reuse = nullptr);

enum class FailureKind { Solver, Stepsize, Degenerate };

struct ReconstructionResult {
  std::vector<IterateRecord> iterates;
  std::optional<FailureKind> failure;
  std::string failure_message;
};

/// Damped fixed-point iteration from (p0, q0): evaluate the update map,
/// stop when its combined L2 norm falls to tol or k_max is reached, else
/// step by the largest monotone step size. Solver failures abort the loop
/// but keep the partial iterate history.
ReconstructionResult reconstruct(const InversionProblem& prob, const Field& p0, const Field& q0,
                                 const InverseOptions& opts);

/// Empirical contraction study around the exact coefficients: random smooth
/// perturbations with combined L2 norm at most rho, one update-map
/// application each, ratio of output to input distance from the truth.
struct ProbeSample {
  double perturbation_norm;
  double ratio;
  bool ok;
  std::string error;
};
struct ProbeReport {
  std::vector<ProbeSample> samples;
  double worst = 0.0;   // largest ratio among successful samples
  double median = 0.0;  // median ratio among successful samples
  int n_failed = 0;
};
ProbeReport contraction_probe(const InversionProblem& prob, const Field& p_act,
                              const Field& q_act, double rho, int n_samples, uint64_t seed,
                              const InverseOptions& opts = {});

}  // namespace fracrd
