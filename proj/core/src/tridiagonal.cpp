#include "fracrd/tridiagonal.hpp"

#include <cmath>

#include "fracrd/errors.hpp"

namespace fracrd {

Field TridiagonalOperator::apply(const Field& u) const {
  if (!(u.grid() == grid)) throw PreconditionError("operand grid mismatch");
  const int n = grid.n_nodes();
  Field out(grid);
  out[0] = diag[0] * u[0] + super[0] * u[1];
  for (int j = 1; j < n - 1; ++j)
    out[j] = sub[static_cast<size_t>(j)] * u[j - 1] + diag[static_cast<size_t>(j)] * u[j] +
             super[static_cast<size_t>(j)] * u[j + 1];
  out[n - 1] = sub[static_cast<size_t>(n - 1)] * u[n - 2] + diag[static_cast<size_t>(n - 1)] * u[n - 1];
  return out;
}

Field TridiagonalOperator::boundary_rhs(double a_left, double a_right) const {
  Field out(grid);
  out[0] = (bc_left == BcKind::Dirichlet) ? a_left : data_coeff_left * a_left;
  const int last = grid.n_nodes() - 1;
  out[last] = (bc_right == BcKind::Dirichlet) ? a_right : data_coeff_right * a_right;
  return out;
}

Field TridiagonalOperator::solve(const Field& rhs) const {
  if (!(rhs.grid() == grid)) throw PreconditionError("rhs grid mismatch");
  std::vector<double> x =
      thomas_solve(sub, diag, super, std::span<const double>(rhs.values()));
  return Field(grid, std::move(x));
}

TridiagonalOperator assemble(const Field& diffusivity, const Field& potential,
                             const SpatialGrid& grid, const BoundaryCondition& left,
                             const BoundaryCondition& right) {
  if (!(diffusivity.grid() == grid) || !(potential.grid() == grid))
    throw PreconditionError("coefficient grid mismatch");
  const int n = grid.n_nodes();
  if (n < 3) throw ConfigError("operator assembly needs at least two cells");
  const double h = grid.h();
  const double ih2 = 1.0 / (h * h);

  TridiagonalOperator op{grid,
                         std::vector<double>(static_cast<size_t>(n), 0.0),
                         std::vector<double>(static_cast<size_t>(n), 0.0),
                         std::vector<double>(static_cast<size_t>(n), 0.0),
                         left.kind,
                         right.kind,
                         0.0,
                         0.0};

  auto dmid = [&](int j) { return 0.5 * (diffusivity[j] + diffusivity[j + 1]); };

  for (int j = 1; j < n - 1; ++j) {
    const double dl = dmid(j - 1);
    const double dr = dmid(j);
    op.sub[static_cast<size_t>(j)] = -dl * ih2;
    op.diag[static_cast<size_t>(j)] = (dl + dr) * ih2 + potential[j];
    op.super[static_cast<size_t>(j)] = -dr * ih2;
  }

  if (left.kind == BcKind::Dirichlet) {
    op.diag[0] = 1.0;
  } else {
    // Ghost value u_{-1} = u_1 + 2h (a - beta u_0) with mirrored midpoint D.
    const double dm = dmid(0);
    const double beta = (left.kind == BcKind::Impedance) ? left.beta : 0.0;
    op.diag[0] = 2.0 * dm * ih2 + potential[0] + 2.0 * dm * beta / h;
    op.super[0] = -2.0 * dm * ih2;
    op.data_coeff_left = 2.0 * dm / h;
  }

  const int last = n - 1;
  if (right.kind == BcKind::Dirichlet) {
    op.diag[static_cast<size_t>(last)] = 1.0;
  } else {
    const double dm = dmid(last - 1);
    const double beta = (right.kind == BcKind::Impedance) ? right.beta : 0.0;
    op.diag[static_cast<size_t>(last)] = 2.0 * dm * ih2 + potential[last] + 2.0 * dm * beta / h;
    op.sub[static_cast<size_t>(last)] = -2.0 * dm * ih2;
    op.data_coeff_right = 2.0 * dm / h;
  }
  return op;
}

std::vector<double> thomas_solve(std::span<const double> sub, std::span<const double> diag,
                                 std::span<const double> super, std::span<const double> rhs) {
  const size_t n = diag.size();
  if (sub.size() != n || super.size() != n || rhs.size() != n)
    throw PreconditionError("tridiagonal band sizes disagree");

  double row_scale = 0.0;
  for (size_t j = 0; j < n; ++j)
    row_scale = std::max(row_scale, std::abs(sub[j]) + std::abs(diag[j]) + std::abs(super[j]));
  const double pivot_floor = 1e-12 * row_scale;

  std::vector<double> c(n, 0.0), x(n, 0.0);
  double piv = diag[0];
  if (!(std::abs(piv) > pivot_floor)) throw SingularOperator("zero pivot in tridiagonal solve");
  c[0] = super[0] / piv;
  x[0] = rhs[0] / piv;
  for (size_t j = 1; j < n; ++j) {
    piv = diag[j] - sub[j] * c[j - 1];
    if (!(std::abs(piv) > pivot_floor)) throw SingularOperator("zero pivot in tridiagonal solve");
    c[j] = super[j] / piv;
    x[j] = (rhs[j] - sub[j] * x[j - 1]) / piv;
  }
  for (size_t j = n - 1; j-- > 0;) x[j] -= c[j] * x[j + 1];
  return x;
}

}  // namespace fracrd
