#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "fracrd/boundary.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"
#include "fracrd/tridiagonal.hpp"

using namespace fracrd;

namespace {

constexpr double pi = std::numbers::pi;

TridiagonalOperator make_op(const SpatialGrid& g, double d_const,
                            const BoundaryCondition& left,
                            const BoundaryCondition& right) {
  return assemble(Field(g, 1.0), Field(g, d_const), g, left, right);
}

}  // namespace

TEST_CASE("linear profiles are flux-free in the interior") {
  SpatialGrid g(32, 0.0, 1.0);
  const auto op = make_op(g, 0.0, BoundaryCondition::neumann(), BoundaryCondition::neumann());
  const Field u = Field::sample(g, [](double x) { return 2.0 * x + 1.0; });
  const Field au = op.apply(u);
  for (int j = 1; j < g.n_nodes() - 1; ++j) CHECK(std::abs(au[j]) < 1e-9);
}

TEST_CASE("second difference of a sine approaches pi^2 sine") {
  SpatialGrid g(100, 0.0, 1.0);
  const auto op =
      make_op(g, 0.0, BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(0.0));
  const Field u = Field::sample(g, [](double x) { return std::sin(pi * x); });
  const Field au = op.apply(u);
  // The three-point stencil carries a relative defect of (pi h)^2 / 12.
  for (int j = 1; j < g.n_nodes() - 1; ++j)
    CHECK(au[j] == doctest::Approx(pi * pi * u[j]).epsilon(3e-4));
  // Dirichlet rows are identity rows.
  CHECK(au[0] == doctest::Approx(u[0]));
  CHECK(au[g.n_nodes() - 1] == doctest::Approx(u[g.n_nodes() - 1]));
}

TEST_CASE("solve inverts apply on a manufactured profile") {
  SpatialGrid g(100, 0.0, 1.0);
  const auto op =
      make_op(g, 1.0, BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(0.0));
  // -u'' + u = (pi^2 + 1) sin(pi x), u(0) = u(1) = 0  =>  u = sin(pi x).
  Field rhs = Field::sample(g, [](double x) { return (pi * pi + 1.0) * std::sin(pi * x); });
  rhs[0] = 0.0;
  rhs[g.n_nodes() - 1] = 0.0;
  const Field u = op.solve(rhs);
  for (int j = 0; j < g.n_nodes(); ++j)
    CHECK(std::abs(u[j] - std::sin(pi * g.node(j))) < 5e-4);

  // Round trip: apply(solve(rhs)) returns rhs.
  const Field back = op.apply(u);
  for (int j = 0; j < g.n_nodes(); ++j)
    CHECK(back[j] == doctest::Approx(rhs[j]).epsilon(1e-10));
}

TEST_CASE("constant state reads the potential under zero-flux rows") {
  SpatialGrid g(20, 0.0, 1.0);
  const auto op = make_op(g, 2.5, BoundaryCondition::neumann(), BoundaryCondition::neumann());
  const Field one(g, 1.0);
  const Field au = op.apply(one);
  for (int j = 0; j < g.n_nodes(); ++j) CHECK(au[j] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("pure zero-flux operator without absorption is singular") {
  SpatialGrid g(16, 0.0, 1.0);
  const auto op = make_op(g, 0.0, BoundaryCondition::neumann(), BoundaryCondition::neumann());
  const Field rhs(g, 1.0);
  CHECK_THROWS_AS((void)op.solve(rhs), SingularOperator);
}

TEST_CASE("impedance with zero transfer coefficient matches zero-flux rows") {
  SpatialGrid g(24, 0.0, 1.0);
  const auto zf = make_op(g, 1.0, BoundaryCondition::neumann(), BoundaryCondition::neumann());
  const auto imp = make_op(g, 1.0, BoundaryCondition::impedance(0.0),
                           BoundaryCondition::impedance(0.0));
  for (int j = 0; j < g.n_nodes(); ++j) {
    CHECK(imp.diag[static_cast<size_t>(j)] ==
          doctest::Approx(zf.diag[static_cast<size_t>(j)]).epsilon(1e-14));
  }
  CHECK(imp.data_coeff_left == doctest::Approx(zf.data_coeff_left));
  CHECK(imp.data_coeff_right == doctest::Approx(zf.data_coeff_right));

  // A positive transfer coefficient adds beta-weighted absorption at the ends.
  const auto imp2 = make_op(g, 1.0, BoundaryCondition::impedance(3.0),
                            BoundaryCondition::impedance(0.0));
  CHECK(imp2.diag[0] > zf.diag[0]);
  CHECK(imp2.diag[static_cast<size_t>(g.n_nodes() - 1)] ==
        doctest::Approx(zf.diag[static_cast<size_t>(g.n_nodes() - 1)]).epsilon(1e-14));
}

TEST_CASE("boundary data lands with the documented weights") {
  SpatialGrid g(10, 0.0, 1.0);
  const double h = g.h();

  const auto dir = make_op(g, 0.0, BoundaryCondition::dirichlet(0.0),
                           BoundaryCondition::dirichlet(0.0));
  const Field bd = dir.boundary_rhs(4.0, -2.0);
  CHECK(bd[0] == doctest::Approx(4.0));
  CHECK(bd[g.n_nodes() - 1] == doctest::Approx(-2.0));
  for (int j = 1; j < g.n_nodes() - 1; ++j) CHECK(bd[j] == 0.0);

  const auto zf = make_op(g, 0.0, BoundaryCondition::neumann(), BoundaryCondition::neumann());
  const Field bn = zf.boundary_rhs(1.0, 2.0);
  // Ghost elimination turns flux data a into (2 D / h) a at the end rows.
  CHECK(bn[0] == doctest::Approx(2.0 / h * 1.0));
  CHECK(bn[g.n_nodes() - 1] == doctest::Approx(2.0 / h * 2.0));
}

TEST_CASE("dirichlet solve honors inhomogeneous end values") {
  SpatialGrid g(40, 0.0, 1.0);
  const auto op = make_op(g, 0.0, BoundaryCondition::dirichlet(1.0),
                          BoundaryCondition::dirichlet(3.0));
  // -u'' = 0 with u(0) = 1, u(1) = 3 has the straight line 1 + 2x.
  Field rhs(g, 0.0);
  Field full = rhs + op.boundary_rhs(1.0, 3.0);
  const Field u = op.solve(full);
  for (int j = 0; j < g.n_nodes(); ++j)
    CHECK(u[j] == doctest::Approx(1.0 + 2.0 * g.node(j)).epsilon(1e-10));
}

TEST_CASE("variable diffusivity uses interface means") {
  // With D(x) = 1 + x and u = x: -(D u')' = -D' u' = -1 for all x.
  SpatialGrid g(64, 0.0, 1.0);
  const Field D = Field::sample(g, [](double x) { return 1.0 + x; });
  const auto op = assemble(D, Field(g, 0.0), g, BoundaryCondition::dirichlet(0.0),
                           BoundaryCondition::dirichlet(1.0));
  const Field u = Field::sample(g, [](double x) { return x; });
  const Field au = op.apply(u);
  for (int j = 1; j < g.n_nodes() - 1; ++j)
    CHECK(au[j] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("thomas elimination refuses vanishing pivots") {
  const std::vector<double> sub = {0.0, 1.0, 1.0};
  const std::vector<double> super = {1.0, 1.0, 0.0};
  const std::vector<double> rhs = {1.0, 1.0, 1.0};
  // Row sums are fine but elimination hits a zero pivot in row 1:
  // diag = (1, 1, 1) with sub/super pattern above makes the second pivot 0.
  const std::vector<double> diag = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS((void)thomas_solve(sub, diag, super, rhs), SingularOperator);

  // A diagonally dominant system solves to rounding.
  const std::vector<double> d2 = {3.0, 3.0, 3.0};
  const std::vector<double> x = thomas_solve(sub, d2, super, rhs);
  CHECK(3.0 * x[0] + x[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[0] + 3.0 * x[1] + x[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] + 3.0 * x[2] == doctest::Approx(1.0).epsilon(1e-14));
}
