#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "fracrd/config.hpp"
#include "fracrd/errors.hpp"

using namespace fracrd;

TEST_CASE("defaults describe the standard two-source experiment") {
  const ExperimentConfig cfg;
  CHECK(cfg.mode == "two_run");
  CHECK(cfg.f_name == "f4");
  CHECK(cfg.alpha == doctest::Approx(0.8));
  CHECK(cfg.T == doctest::Approx(0.3));
  CHECK(cfg.n_cells == 100);
  CHECK(cfg.n_steps == 300);
  CHECK(cfg.r1 == "const 5");
  CHECK(cfg.r2 == "affine 5 5");
  // The frozen background: absorbing potential and warm initial states.
  CHECK(cfg.potential == "const 6");
  CHECK(cfg.u0_1 == "const 2");
  CHECK(cfg.u0_2 == "const 2");
  CHECK(cfg.phantom_p == "gauss 0.15 1 0.5 0.1");
  CHECK(cfg.phantom_q == "gauss 0.5 7 0.7 0.1");
  CHECK(cfg.crime == "refined2x");
  CHECK(cfg.delta == 0.0);
  CHECK(cfg.init_p == "const 0");
  CHECK(cfg.init_q == "const 0");
  CHECK(cfg.increment_form == "fixed_point");
  CHECK(cfg.rho == doctest::Approx(0.1));
  CHECK(cfg.probe_samples == 20);
}

TEST_CASE("serialization round-trips and is idempotent") {
  const ExperimentConfig def;
  const std::string s1 = serialize_config(def);
  const ExperimentConfig back = parse_config(s1);
  const std::string s2 = serialize_config(back);
  CHECK(s1 == s2);
  CHECK(back.alpha == def.alpha);
  CHECK(back.potential == def.potential);
  CHECK(back.out_dir == def.out_dir);

  ExperimentConfig custom;
  custom.alpha = 0.65;
  custom.delta = 0.013;
  custom.n_cells = 77;
  custom.phantom_q = "gauss 1 2 0.3 0.05";
  custom.seed = 999;
  const ExperimentConfig rt = parse_config(serialize_config(custom));
  CHECK(rt.alpha == doctest::Approx(0.65));
  CHECK(rt.delta == doctest::Approx(0.013));
  CHECK(rt.n_cells == 77);
  CHECK(rt.phantom_q == "gauss 1 2 0.3 0.05");
  CHECK(rt.seed == 999);
}

TEST_CASE("comments, blanks, and spacing are tolerated") {
  const ExperimentConfig cfg = parse_config(
      "# leading comment\n"
      "[problem]\n"
      "\n"
      "alpha = 0.6   # trailing comment\n"
      "T = 0.25\n"
      "; another comment style\n"
      "[inverse]\n"
      "k_max = 3\n");
  CHECK(cfg.alpha == doctest::Approx(0.6));
  CHECK(cfg.T == doctest::Approx(0.25));
  CHECK(cfg.k_max == 3);
  // Untouched keys keep their defaults.
  CHECK(cfg.n_cells == 100);
}

TEST_CASE("snapshot-time presets fill the unset keys") {
  const ExperimentConfig far = parse_config("[problem]\nmode = two_time_far\n");
  CHECK(far.T1 == doctest::Approx(0.05));
  CHECK(far.T2 == doctest::Approx(0.3));

  const ExperimentConfig near = parse_config("[problem]\nmode = two_time_near\n");
  CHECK(near.T1 == doctest::Approx(0.2));
  CHECK(near.T2 == doctest::Approx(0.3));
}

TEST_CASE("classical-limit presets declare their full fixture") {
  const ExperimentConfig ti = parse_config("[problem]\nmode = two_init\n");
  CHECK(ti.f_name == "f1");
  CHECK(ti.alpha == doctest::Approx(1.0));
  CHECK(ti.T == doctest::Approx(1.6));
  CHECK(ti.potential == "zero");
  CHECK(ti.u0_1 == "cos_bump");
  CHECK(ti.u0_2 == "const 2");
  CHECK(ti.r1 == "zero");
  CHECK(ti.r2 == "zero");
  CHECK(ti.phantom_p == "gauss 0.5 1 0.5 0.1");
  CHECK(ti.phantom_q == "gauss 0.5 3 0.7 0.1");
  CHECK(ti.init_p == "const 0.5");
  CHECK(ti.init_q == "const 2");

  const ExperimentConfig tb = parse_config("[problem]\nmode = two_bc\n");
  CHECK(tb.alpha == doctest::Approx(1.0));
  CHECK(tb.T == doctest::Approx(0.5));
  CHECK(tb.potential == "zero");
  CHECK(tb.u0_1 == "one_plus_cos");
  CHECK(tb.u0_2 == "one_plus_cos");
  CHECK(tb.bc1_left == "dirichlet_ramp 2 -1");
  CHECK(tb.bc2_left == "neumann 0");
  CHECK(tb.phantom_q == "gauss 0.5 3 0.7 0.1");
}

TEST_CASE("explicit file values override preset defaults") {
  const ExperimentConfig cfg = parse_config(
      "[problem]\n"
      "mode = two_init\n"
      "T = 0.9\n"
      "u0_2 = cubic_bump\n");
  CHECK(cfg.T == doctest::Approx(0.9));
  CHECK(cfg.u0_2 == "cubic_bump");
  // Presets still fill everything the file left out.
  CHECK(cfg.alpha == doctest::Approx(1.0));
  CHECK(cfg.u0_1 == "cos_bump");
}

TEST_CASE("malformed configurations are rejected with a config error") {
  CHECK_THROWS_AS((void)parse_config("[problem]\nmode = three_run\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[problem]\nbogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[bogus]\nalpha = 0.5\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[problem]\nalpha = 0.5\nalpha = 0.6\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[problem]\nalpha = abc\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[problem]\nalpha 0.5\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("alpha = 0.5\n"), ConfigError);  // key before any section
  CHECK_THROWS_AS((void)parse_config("[inverse]\nincrement_form = quadratic\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[data]\ncrime = none\n"), ConfigError);
}

TEST_CASE("loading reports missing files") {
  CHECK_THROWS_AS((void)load_config("/nonexistent/path/exp.cfg"), ConfigError);
}
