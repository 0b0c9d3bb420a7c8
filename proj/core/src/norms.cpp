#include "fracrd/norms.hpp"

#include <cmath>

namespace fracrd {

namespace {

double trapezoid_sq(std::span<const double> v, double h) {
  const size_t n = v.size();
  double s = 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]);
  for (size_t j = 1; j + 1 < n; ++j) s += v[j] * v[j];
  return h * s;
}

}  // namespace

double sobolev_norm(const Field& u, NormOrder order) {
  const double h = u.grid().h();
  const int n = u.size();
  double total = trapezoid_sq(u.values(), h);
  if (order == NormOrder::L2) return std::sqrt(total);

  // Midpoint rule on cellwise first differences.
  double grad = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    const double g = (u[j + 1] - u[j]) / h;
    grad += h * g * g;
  }
  total += grad;
  if (order == NormOrder::H1) return std::sqrt(total);

  if (n >= 3) {
    std::vector<double> s(static_cast<size_t>(n));
    const double ih2 = 1.0 / (h * h);
    for (int j = 1; j + 1 < n; ++j)
      s[static_cast<size_t>(j)] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * ih2;
    s[0] = (u[2] - 2.0 * u[1] + u[0]) * ih2;
    s[static_cast<size_t>(n - 1)] = (u[n - 1] - 2.0 * u[n - 2] + u[n - 3]) * ih2;
    total += trapezoid_sq(s, h);
  }
  return std::sqrt(total);
}

double combined_l2(const Field& a, const Field& b) {
  const double na = sobolev_norm(a, NormOrder::L2);
  const double nb = sobolev_norm(b, NormOrder::L2);
  return std::sqrt(na * na + nb * nb);
}

}  // namespace fracrd
