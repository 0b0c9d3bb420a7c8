#include "fracrd/caputo.hpp"

#include <cmath>

#include "fracrd/errors.hpp"

namespace fracrd {

L1Weights l1_weights(double alpha, double dt, int n_steps) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (n_steps < 1) throw ConfigError("need at least one step");
  L1Weights w;
  w.alpha = alpha;
  w.dt = dt;
  w.scale = std::pow(dt, -alpha) / std::tgamma(2.0 - alpha);
  w.b.resize(static_cast<size_t>(n_steps));
  const double e = 1.0 - alpha;
  w.b[0] = 1.0;  // 1^e - 0^e for every order; pow(0, 0) would spoil alpha = 1
  for (int j = 1; j < n_steps; ++j)
    w.b[static_cast<size_t>(j)] = std::pow(j + 1.0, e) - std::pow(static_cast<double>(j), e);
  return w;
}

namespace {

/// The anchor reads levels 0..m-1 only; the memory value also reads level m.
void check_anchor_level(size_t available, int m, const L1Weights& w) {
  if (m < 1) throw PreconditionError("memory value needs level m >= 1");
  if (available < static_cast<size_t>(m))
    throw PreconditionError("history does not reach the requested level");
  if (w.b.size() < static_cast<size_t>(m))
    throw PreconditionError("weights do not reach the requested level");
}

void check_level(size_t available, int m, const L1Weights& w) {
  check_anchor_level(available, m, w);
  if (available < static_cast<size_t>(m) + 1)
    throw PreconditionError("history does not reach the requested level");
}

}  // namespace

double caputo_value(std::span<const double> history, int m, const L1Weights& w) {
  check_level(history.size(), m, w);
  return w.scale * (history[static_cast<size_t>(m)] - l1_history_anchor(history, m, w));
}

Field caputo_value(std::span<const Field> history, int m, const L1Weights& w) {
  check_level(history.size(), m, w);
  Field anchor = l1_history_anchor(history, m, w);
  Field out = history[static_cast<size_t>(m)] - anchor;
  return w.scale * out;
}

double l1_history_anchor(std::span<const double> history, int m, const L1Weights& w) {
  check_anchor_level(history.size(), m, w);
  double a = history[static_cast<size_t>(m - 1)];
  if (w.alpha == 1.0) return a;  // backward Euler: no tail
  for (int j = 1; j < m; ++j)
    a -= w.b[static_cast<size_t>(j)] *
         (history[static_cast<size_t>(m - j)] - history[static_cast<size_t>(m - j - 1)]);
  return a;
}

Field l1_history_anchor(std::span<const Field> history, int m, const L1Weights& w) {
  check_anchor_level(history.size(), m, w);
  Field a = history[static_cast<size_t>(m - 1)];
  if (w.alpha == 1.0) return a;
  const int n = a.size();
  for (int j = 1; j < m; ++j) {
    const double bj = w.b[static_cast<size_t>(j)];
    const Field& hi = history[static_cast<size_t>(m - j)];
    const Field& lo = history[static_cast<size_t>(m - j - 1)];
    for (int i = 0; i < n; ++i) a[i] -= bj * (hi[i] - lo[i]);
  }
  return a;
}

}  // namespace fracrd
