#pragma once

#include <span>
#include <vector>

#include "fracrd/boundary.hpp"
#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"

namespace fracrd {

/// Second-order finite-difference form of L = -(D u')' + d u on a
/// SpatialGrid, with the endpoint rows encoding the boundary conditions:
///   Dirichlet rows are replaced by identity rows; their data enters a
///   right-hand side through boundary_rhs.
///   Neumann/impedance rows eliminate the ghost node to second order; the
///   matrix keeps the homogeneous part and boundary_rhs carries the data
///   term (2 D_mid / h) * a.
/// Interface midpoints use the arithmetic mean of nodal D.
struct TridiagonalOperator {
  SpatialGrid grid;
  std::vector<double> sub;    // sub[j] multiplies u_{j-1}; sub[0] unused
  std::vector<double> diag;   // diag[j] multiplies u_j
  std::vector<double> super;  // super[j] multiplies u_{j+1}; last unused
  BcKind bc_left = BcKind::Neumann;
  BcKind bc_right = BcKind::Neumann;
  double data_coeff_left = 0.0;   // multiplies left data in boundary_rhs
  double data_coeff_right = 0.0;  // multiplies right data in boundary_rhs

  bool dirichlet_row(int j) const {
    if (j == 0) return bc_left == BcKind::Dirichlet;
    if (j == grid.n_nodes() - 1) return bc_right == BcKind::Dirichlet;
    return false;
  }

  /// Matrix-vector product of the homogeneous rows.
  Field apply(const Field& u) const;

  /// Data contribution to a right-hand side: boundary values at Dirichlet
  /// rows, (2 D_mid / h) * a at Neumann/impedance rows, zero elsewhere.
  Field boundary_rhs(double a_left, double a_right) const;

  /// Direct solve of (this matrix) x = rhs. Dirichlet row values of rhs
  /// become the boundary values of x.
  Field solve(const Field& rhs) const;
};

TridiagonalOperator assemble(const Field& diffusivity, const Field& potential,
                             const SpatialGrid& grid, const BoundaryCondition& left,
                             const BoundaryCondition& right);

/// Thomas elimination without pivoting. Throws SingularOperator when a pivot
/// falls below 1e-12 times the largest row sum.
std::vector<double> thomas_solve(std::span<const double> sub, std::span<const double> diag,
                                 std::span<const double> super, std::span<const double> rhs);

}  // namespace fracrd
