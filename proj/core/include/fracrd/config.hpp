#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace fracrd {

/// One experiment, as read from a sectioned key = value text file. String
/// fields hold small expression forms ("const 5", "affine 5 5", "gauss b A c
/// w", named profiles) that the experiment builder turns into callables.
///
/// The mode chooses the observation layout and fills mode-specific defaults
/// for keys the file does not set:
///   two_run        two sources, data at the common final time
///   two_time_far   one source, data at T1 = 0.05 and T2 = 0.3
///   two_time_near  one source, data at T1 = 0.2 and T2 = 0.3
///   two_init       two initial states, classical limit fixture
///   two_bc         two boundary setups, classical limit fixture
struct ExperimentConfig {
  // [problem]
  std::string mode = "two_run";
  std::string f_name = "f4";
  double alpha = 0.8;
  double T = 0.3;
  double T1 = 0.05;
  double T2 = 0.3;
  int n_cells = 100;
  int n_steps = 300;
  double x_min = 0.0;
  double x_max = 1.0;
  std::string diffusivity = "const 1";
  // Known absorbing background and a warm initial state: both raise the
  // relaxation rate of coefficient perturbations relative to the fractional
  // memory kernel at T, which is what makes the update map contract by the
  // final time. With potential 0 and u0 = 0 the probe ratios exceed 1.
  std::string potential = "const 6";
  std::string r1 = "const 5";
  std::string r2 = "affine 5 5";
  std::string u0_1 = "const 2";
  std::string u0_2 = "const 2";
  std::string bc1_left = "neumann 0";
  std::string bc1_right = "neumann 0";
  std::string bc2_left = "neumann 0";
  std::string bc2_right = "neumann 0";
  double blowup_cap = 1e6;

  // [phantom]
  std::string phantom_p = "gauss 0.15 1 0.5 0.1";
  std::string phantom_q = "gauss 0.5 7 0.7 0.1";

  // [data]
  std::string crime = "refined2x";
  double delta = 0.0;
  double smoothing_length = 0.0;  // <= 0 means 2h
  uint64_t seed = 1234;

  // [inverse]
  double tol = 1e-6;
  int k_max = 20;
  double theta = 0.5;
  int ell_max = 6;
  double det_floor_rel = 1e-6;
  std::string increment_form = "fixed_point";
  std::string init_p = "const 0";
  std::string init_q = "const 0";

  // [forward]
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  bool steady_distance = false;

  // [probe]
  double rho = 0.1;
  int probe_samples = 20;

  // [output]
  std::string out_dir = "out";
};

/// Parses sectioned key = value text. '#' and ';' start comments. Unknown
/// keys and malformed values raise ConfigError.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical form: every key, canonical order, shortest exact numbers.
/// serialize(parse(s)) is idempotent on strings.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace fracrd
