#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracrd/csv.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"
#include "fracrd/nonlinearity.hpp"
#include "fracrd/norms.hpp"
#include "fracrd/phantoms.hpp"
#include "fracrd/random.hpp"

using namespace fracrd;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("spatial grid geometry") {
  SpatialGrid g(4, 0.0, 2.0);
  CHECK(g.n_nodes() == 5);
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.node(0) == doctest::Approx(0.0));
  CHECK(g.node(4) == doctest::Approx(2.0));

  SpatialGrid fine = g.refined(3);
  CHECK(fine.n_cells == 12);
  CHECK(fine.x_min == g.x_min);
  CHECK(fine.x_max == g.x_max);
  // Shared nodes sit at multiples of the factor.
  CHECK(fine.node(3) == doctest::Approx(g.node(1)));

  CHECK(g == SpatialGrid(4, 0.0, 2.0));
  CHECK_FALSE(g == fine);

  CHECK_THROWS_AS(SpatialGrid(0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(SpatialGrid(4, 1.0, 1.0), ConfigError);
}

TEST_CASE("time grid levels and nearest level") {
  TimeGrid tg(10, 0.5);
  CHECK(tg.dt() == doctest::Approx(0.05));
  CHECK(tg.level(10) == doctest::Approx(0.5));
  CHECK(tg.refined().n_steps == 20);

  CHECK(tg.nearest_level(0.24) == 5);
  CHECK(tg.nearest_level(0.26) == 5);
  CHECK(tg.nearest_level(-3.0) == 0);   // clamps below
  CHECK(tg.nearest_level(9.0) == 10);   // clamps above

  CHECK_THROWS_AS(TimeGrid(0, 1.0), ConfigError);
  CHECK_THROWS_AS(TimeGrid(5, 0.0), ConfigError);
}

TEST_CASE("field construction and arithmetic") {
  SpatialGrid g(4, 0.0, 1.0);
  Field a(g, 2.0);
  CHECK(a.size() == 5);
  CHECK(a.min() == doctest::Approx(2.0));

  Field b = Field::sample(g, [](double x) { return x; });
  CHECK(b[2] == doctest::Approx(0.5));

  Field s = a + b;
  CHECK(s[4] == doctest::Approx(3.0));
  Field d = a - b;
  CHECK(d[4] == doctest::Approx(1.0));
  Field sc = 3.0 * b;
  CHECK(sc[4] == doctest::Approx(3.0));
  Field hp = hadamard(b, b);
  CHECK(hp[4] == doctest::Approx(1.0));
  Field m = map(b, [](double x) { return x * x + 1.0; });
  CHECK(m[2] == doctest::Approx(1.25));

  Field neg = Field::sample(g, [](double x) { return x - 0.5; });
  CHECK(neg.linf() == doctest::Approx(0.5));
  CHECK(neg.min() == doctest::Approx(-0.5));
  CHECK(neg.all_finite());
  neg[0] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(neg.all_finite());

  CHECK_THROWS_AS(Field(g, std::vector<double>(3, 0.0)), PreconditionError);
  SpatialGrid other(5, 0.0, 1.0);
  Field c(other, 1.0);
  CHECK_THROWS_AS((void)(a + c), PreconditionError);
}

TEST_CASE("field restriction is injection on shared nodes") {
  SpatialGrid coarse(4, 0.0, 1.0);
  SpatialGrid fine = coarse.refined(2);
  Field f = Field::sample(fine, [](double x) { return std::sin(x); });
  Field r = f.restricted_to(coarse);
  for (int j = 0; j < coarse.n_nodes(); ++j)
    CHECK(r[j] == doctest::Approx(std::sin(coarse.node(j))).epsilon(1e-14));

  // Refinement (the other direction) is not a coarsening.
  Field c(coarse, 1.0);
  CHECK_THROWS_AS((void)c.restricted_to(fine), PreconditionError);
  SpatialGrid shifted(2, 0.0, 0.5);
  CHECK_THROWS_AS((void)f.restricted_to(shifted), PreconditionError);
}

TEST_CASE("reconstruction targets hit their stated anchor values") {
  CHECK(phantom_p(0.5) == doctest::Approx(1.15));
  CHECK(phantom_q(0.7) == doctest::Approx(7.5));
  // One width off the center the bump has decayed by exactly 1/e.
  CHECK(phantom_p(0.4) == doctest::Approx(0.15 + std::exp(-1.0)));
  CHECK(phantom_q(0.8) == doctest::Approx(0.5 + 7.0 * std::exp(-1.0)));
  // Far from the bumps only the base remains.
  CHECK(phantom_p(0.0) == doctest::Approx(0.15).epsilon(1e-6));

  SpatialGrid g(10, 0.0, 1.0);
  auto [p, q] = make_phantoms(g);
  CHECK(p[5] == doctest::Approx(1.15));
  CHECK(q[7] == doctest::Approx(7.5));
}

TEST_CASE("builtin nonlinearity menu and derivative consistency") {
  for (const char* name : {"f1", "f2", "f3", "f4"}) {
    Nonlinearity nl = builtin_nonlinearity(name);
    CHECK(nl.name == name);
    CHECK(nl.f(0.0) == doctest::Approx(0.0));
    CHECK(nl.df(0.0) == doctest::Approx(0.0));
    // Central differences agree with the stated derivatives.
    const double u = 1.3;
    const double eps = 1e-6;
    const double fd1 = (nl.f(u + eps) - nl.f(u - eps)) / (2.0 * eps);
    const double fd2 = (nl.df(u + eps) - nl.df(u - eps)) / (2.0 * eps);
    CHECK(nl.df(u) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(nl.ddf(u) == doctest::Approx(fd2).epsilon(1e-6));
  }
  CHECK(builtin_nonlinearity("f1").f(3.0) == doctest::Approx(9.0));
  CHECK(builtin_nonlinearity("f2").f(2.0) == doctest::Approx(2.0));
  CHECK(builtin_nonlinearity("f3").f(3.0) == doctest::Approx(36.0));
  CHECK(builtin_nonlinearity("f4").f(2.0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(builtin_nonlinearity("f9"), ConfigError);

  SpatialGrid g(2, 0.0, 1.0);
  Field u = Field::sample(g, [](double x) { return 1.0 + x; });
  Nonlinearity nl = builtin_nonlinearity("f4");
  CHECK(nl.apply(u)[2] == doctest::Approx(8.0));
  CHECK(nl.apply_df(u)[2] == doctest::Approx(12.0));
}

TEST_CASE("discrete Sobolev norms on known profiles") {
  SpatialGrid g(200, 0.0, 1.0);
  const double pi = std::numbers::pi;
  Field s = Field::sample(g, [pi](double x) { return std::sin(pi * x); });

  // ||sin(pi x)||_{L2}^2 = 1/2 and ||sin(pi x)||_{H1}^2 = (1 + pi^2)/2.
  CHECK(sobolev_norm(s, NormOrder::L2) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
  CHECK(sobolev_norm(s, NormOrder::H1) ==
        doctest::Approx(std::sqrt((1.0 + pi * pi) / 2.0)).epsilon(1e-4));
  CHECK(sobolev_norm(s, NormOrder::H2) ==
        doctest::Approx(std::sqrt((1.0 + pi * pi + pi * pi * pi * pi) / 2.0))
            .epsilon(1e-3));

  Field c(g, 3.0);
  CHECK(l2_norm(c) == doctest::Approx(3.0).epsilon(1e-12));
  // A constant has no derivative content in the higher orders.
  CHECK(sobolev_norm(c, NormOrder::H2) == doctest::Approx(3.0).epsilon(1e-12));

  Field z(g, 0.0);
  CHECK(combined_l2(c, z) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(combined_l2(c, c) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("full-precision formatting round-trips") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 123456789.123456789, -2.5e17}) {
    const std::string s = format_full(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_full(0.0) == "0");
}

TEST_CASE("csv writer commits atomically with a fixed column count") {
  const auto dir = std::filesystem::temp_directory_path() / "fracrd_test_csv";
  std::filesystem::create_directories(dir);
  const auto path = dir / "table.csv";
  std::filesystem::remove(path);

  {
    CsvWriter w(path, {"a", "b"});
    w.row({1.0, 2.0});
    w.labeled_row("named", std::vector<double>{3.0});
    // Nothing lands on disk before commit.
    CHECK_FALSE(std::filesystem::exists(path));
    w.commit();
  }
  CHECK(std::filesystem::exists(path));
  const std::string text = read_file(path);
  CHECK(text.substr(0, 4) == "a,b\n");
  CHECK(text.find("named,3") != std::string::npos);

  std::filesystem::remove_all(dir);
}

TEST_CASE("normal sampler is deterministic and roughly standard") {
  NormalSampler a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differs = false;
  double sum = 0.0, sum2 = 0.0;
  const int n = 4000;
  NormalSampler stat(7);
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    all_equal = all_equal && (x == b.normal());
    any_differs = any_differs || (x != c.normal());
    const double y = stat.normal();
    sum += y;
    sum2 += y * y;
  }
  CHECK(all_equal);
  CHECK(any_differs);
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.1));
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.1));

  NormalSampler u(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform01();
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("smooth random field is reproducible and respects the grid") {
  SpatialGrid g(50, 0.0, 1.0);
  NormalSampler r1(5), r2(5);
  Field f1 = smooth_random_field(g, r1);
  Field f2 = smooth_random_field(g, r2);
  for (int j = 0; j < f1.size(); ++j) CHECK(f1[j] == f2[j]);
  CHECK(f1.all_finite());
  // Cosine series has zero slope at both ends; first differences shrink there.
  CHECK(std::abs(f1[1] - f1[0]) < 0.1 * f1.linf());
}
