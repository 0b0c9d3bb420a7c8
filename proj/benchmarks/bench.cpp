// Hot paths: the memory-sum anchor (quadratic in steps over a whole solve),
// the tridiagonal elimination, one implicit solve, and one update-map
// application at the shipping experiment size.
#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracrd/caputo.hpp"
#include "fracrd/config.hpp"
#include "fracrd/experiment.hpp"
#include "fracrd/forward.hpp"
#include "fracrd/inverse.hpp"
#include "fracrd/problem.hpp"
#include "fracrd/tridiagonal.hpp"

using namespace fracrd;

namespace {

void bm_history_anchor(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const L1Weights w = l1_weights(0.8, 1e-3, m);
  std::vector<double> history(static_cast<size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) history[static_cast<size_t>(j)] = std::sin(0.01 * j);
  for (auto _ : state) {
    benchmark::DoNotOptimize(l1_history_anchor(history, m, w));
  }
}
BENCHMARK(bm_history_anchor)->Arg(100)->Arg(300)->Arg(1000);

void bm_thomas_solve(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::vector<double> sub(n, -1.0), diag(n, 4.0), super(n, -1.0), rhs(n, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thomas_solve(sub, diag, super, rhs));
  }
}
BENCHMARK(bm_thomas_solve)->Arg(100)->Arg(1000)->Arg(10000);

ProblemSpec small_problem(int n_cells, int n_steps) {
  SpatialGrid g(n_cells, 0.0, 1.0);
  return ProblemSpec{0.8,
                     Field(g, 1.0),
                     Field(g, 6.0),
                     builtin_nonlinearity("f4"),
                     Field::sample(g, [](double x) {
                       return 0.15 + std::exp(-std::pow((x - 0.5) / 0.1, 2));
                     }),
                     Field::sample(g, [](double x) {
                       return 0.5 + 7.0 * std::exp(-std::pow((x - 0.7) / 0.1, 2));
                     }),
                     [](double, double) { return 5.0; },
                     Field(g, 2.0),
                     BoundaryCondition::neumann(),
                     BoundaryCondition::neumann(),
                     g,
                     TimeGrid(n_steps, 0.3)};
}

void bm_solve_ibvp(benchmark::State& state) {
  const ProblemSpec spec = small_problem(static_cast<int>(state.range(0)),
                                         static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ibvp(spec));
  }
}
BENCHMARK(bm_solve_ibvp)->Args({50, 100})->Args({100, 300});

void bm_update_map(benchmark::State& state) {
  const ExperimentConfig cfg = parse_config("");
  const Experiment ex = build_experiment(cfg);
  const ObservationSet obs = experiment_observations(ex);
  const InversionProblem prob = make_inversion_problem(ex.tmpl, obs, ex.p_act, ex.q_act);
  const auto ops = prob.assemble_operators();
  const Field& p = prob.ground_truth->first;
  const Field& q = prob.ground_truth->second;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_update_map(prob, ops, p, q, ex.inv_opts));
  }
}
BENCHMARK(bm_update_map);

}  // namespace

BENCHMARK_MAIN();
