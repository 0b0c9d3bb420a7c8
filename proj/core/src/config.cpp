#include "fracrd/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "fracrd/errors.hpp"

namespace fracrd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) throw ConfigError("expected integer for " + key);
  return i;
}

uint64_t to_u64(const std::string& key, const std::string& v) {
  uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("bad unsigned integer for " + key);
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true/false for " + key);
}

std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

using KvMap = std::map<std::string, std::string>;

void put_default(KvMap& kv, const std::string& key, const std::string& value) {
  kv.emplace(key, value);  // no overwrite: user values win
}

/// Mode presets fill keys the file left out.
void apply_mode_presets(KvMap& kv, const std::string& mode) {
  if (mode == "two_run") return;
  if (mode == "two_time_far") {
    put_default(kv, "problem.T1", "0.05");
    put_default(kv, "problem.T2", "0.3");
    return;
  }
  if (mode == "two_time_near") {
    put_default(kv, "problem.T1", "0.2");
    put_default(kv, "problem.T2", "0.3");
    return;
  }
  if (mode == "two_init") {
    put_default(kv, "problem.f", "f1");
    put_default(kv, "problem.alpha", "1");
    put_default(kv, "problem.T", "1.6");
    put_default(kv, "problem.potential", "zero");
    put_default(kv, "problem.u0_1", "cos_bump");
    // The cubic profile coincides with the cosine one at x = 1, which
    // degenerates the elimination there; a flat second state keeps the
    // pair separated across the whole domain.
    put_default(kv, "problem.u0_2", "const 2");
    put_default(kv, "problem.r1", "zero");
    put_default(kv, "problem.r2", "zero");
    // The classical equation forgets initial data at rate ~ q, so this
    // mode needs a moderate growth coefficient and a decay-rate phantom
    // bounded away from zero; a tall q bump over a small p base would
    // wash out the spread between the two runs before the final time.
    put_default(kv, "phantom.p", "gauss 0.5 1 0.5 0.1");
    put_default(kv, "phantom.q", "gauss 0.5 3 0.7 0.1");
    put_default(kv, "inverse.init_p", "const 0.5");
    put_default(kv, "inverse.init_q", "const 2");
    return;
  }
  if (mode == "two_bc") {
    put_default(kv, "problem.f", "f1");
    put_default(kv, "problem.alpha", "1");
    put_default(kv, "problem.T", "0.5");
    put_default(kv, "problem.potential", "zero");
    put_default(kv, "problem.u0_1", "one_plus_cos");
    put_default(kv, "problem.u0_2", "one_plus_cos");
    put_default(kv, "problem.r1", "zero");
    put_default(kv, "problem.r2", "zero");
    put_default(kv, "problem.bc1_left", "dirichlet_ramp 2 -1");
    // Same moderate phantoms as two_init: the boundary contrast drives
    // the spread here, but a tall q bump still destabilizes the trial
    // solves of the classical equation.
    put_default(kv, "phantom.p", "gauss 0.5 1 0.5 0.1");
    put_default(kv, "phantom.q", "gauss 0.5 3 0.7 0.1");
    put_default(kv, "inverse.init_p", "const 0.5");
    put_default(kv, "inverse.init_q", "const 2");
    return;
  }
  throw ConfigError("unknown mode: " + mode);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  KvMap kv;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty() || key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
    if (!kv.emplace(section + "." + key, value).second)
      throw ConfigError("duplicate key: " + section + "." + key);
  }

  ExperimentConfig cfg;
  const auto mode_it = kv.find("problem.mode");
  const std::string mode = (mode_it != kv.end()) ? mode_it->second : cfg.mode;
  apply_mode_presets(kv, mode);

  auto take_str = [&](const char* key, std::string& out) {
    if (auto it = kv.find(key); it != kv.end()) {
      out = it->second;
      kv.erase(it);
    }
  };
  auto take_dbl = [&](const char* key, double& out) {
    if (auto it = kv.find(key); it != kv.end()) {
      out = to_double(key, it->second);
      kv.erase(it);
    }
  };
  auto take_int = [&](const char* key, int& out) {
    if (auto it = kv.find(key); it != kv.end()) {
      out = to_int(key, it->second);
      kv.erase(it);
    }
  };

  take_str("problem.mode", cfg.mode);
  cfg.mode = mode;
  take_str("problem.f", cfg.f_name);
  take_dbl("problem.alpha", cfg.alpha);
  take_dbl("problem.T", cfg.T);
  take_dbl("problem.T1", cfg.T1);
  take_dbl("problem.T2", cfg.T2);
  take_int("problem.n_cells", cfg.n_cells);
  take_int("problem.n_steps", cfg.n_steps);
  take_dbl("problem.x_min", cfg.x_min);
  take_dbl("problem.x_max", cfg.x_max);
  take_str("problem.diffusivity", cfg.diffusivity);
  take_str("problem.potential", cfg.potential);
  take_str("problem.r1", cfg.r1);
  take_str("problem.r2", cfg.r2);
  take_str("problem.u0_1", cfg.u0_1);
  take_str("problem.u0_2", cfg.u0_2);
  take_str("problem.bc1_left", cfg.bc1_left);
  take_str("problem.bc1_right", cfg.bc1_right);
  take_str("problem.bc2_left", cfg.bc2_left);
  take_str("problem.bc2_right", cfg.bc2_right);
  take_dbl("problem.blowup_cap", cfg.blowup_cap);

  take_str("phantom.p", cfg.phantom_p);
  take_str("phantom.q", cfg.phantom_q);

  take_str("data.crime", cfg.crime);
  take_dbl("data.delta", cfg.delta);
  take_dbl("data.smoothing_length", cfg.smoothing_length);
  if (auto it = kv.find("data.seed"); it != kv.end()) {
    cfg.seed = to_u64("data.seed", it->second);
    kv.erase(it);
  }

  take_dbl("inverse.tol", cfg.tol);
  take_int("inverse.k_max", cfg.k_max);
  take_dbl("inverse.theta", cfg.theta);
  take_int("inverse.ell_max", cfg.ell_max);
  take_dbl("inverse.det_floor_rel", cfg.det_floor_rel);
  take_str("inverse.increment_form", cfg.increment_form);
  take_str("inverse.init_p", cfg.init_p);
  take_str("inverse.init_q", cfg.init_q);

  take_dbl("forward.newton_tol", cfg.newton_tol);
  take_int("forward.newton_max_iter", cfg.newton_max_iter);
  if (auto it = kv.find("forward.steady_distance"); it != kv.end()) {
    cfg.steady_distance = to_bool("forward.steady_distance", it->second);
    kv.erase(it);
  }

  take_dbl("probe.rho", cfg.rho);
  take_int("probe.samples", cfg.probe_samples);

  take_str("output.dir", cfg.out_dir);

  if (!kv.empty()) throw ConfigError("unknown key: " + kv.begin()->first);

  // Structural checks that do not need the full experiment build.
  if (cfg.n_cells < 2) throw ConfigError("n_cells must be at least 2");
  if (cfg.n_steps < 1) throw ConfigError("n_steps must be at least 1");
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
  if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
  if (!(cfg.x_max > cfg.x_min)) throw ConfigError("x_max must exceed x_min");
  if (!(cfg.theta > 0.0) || cfg.theta >= 1.0) throw ConfigError("theta must lie in (0, 1)");
  if (cfg.k_max < 0 || cfg.ell_max < 0) throw ConfigError("iteration caps must be nonnegative");
  if (cfg.delta < 0.0) throw ConfigError("delta must be nonnegative");
  if (cfg.increment_form != "fixed_point" && cfg.increment_form != "discrepancy")
    throw ConfigError("increment_form must be fixed_point or discrepancy");
  if (cfg.crime != "refined2x" && cfg.crime != "same_grid")
    throw ConfigError("crime must be refined2x or same_grid");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[problem]\n";
  o << "mode = " << c.mode << "\n";
  o << "f = " << c.f_name << "\n";
  o << "alpha = " << shortest(c.alpha) << "\n";
  o << "T = " << shortest(c.T) << "\n";
  o << "T1 = " << shortest(c.T1) << "\n";
  o << "T2 = " << shortest(c.T2) << "\n";
  o << "n_cells = " << c.n_cells << "\n";
  o << "n_steps = " << c.n_steps << "\n";
  o << "x_min = " << shortest(c.x_min) << "\n";
  o << "x_max = " << shortest(c.x_max) << "\n";
  o << "diffusivity = " << c.diffusivity << "\n";
  o << "potential = " << c.potential << "\n";
  o << "r1 = " << c.r1 << "\n";
  o << "r2 = " << c.r2 << "\n";
  o << "u0_1 = " << c.u0_1 << "\n";
  o << "u0_2 = " << c.u0_2 << "\n";
  o << "bc1_left = " << c.bc1_left << "\n";
  o << "bc1_right = " << c.bc1_right << "\n";
  o << "bc2_left = " << c.bc2_left << "\n";
  o << "bc2_right = " << c.bc2_right << "\n";
  o << "blowup_cap = " << shortest(c.blowup_cap) << "\n";
  o << "\n[phantom]\n";
  o << "p = " << c.phantom_p << "\n";
  o << "q = " << c.phantom_q << "\n";
  o << "\n[data]\n";
  o << "crime = " << c.crime << "\n";
  o << "delta = " << shortest(c.delta) << "\n";
  o << "smoothing_length = " << shortest(c.smoothing_length) << "\n";
  o << "seed = " << c.seed << "\n";
  o << "\n[inverse]\n";
  o << "tol = " << shortest(c.tol) << "\n";
  o << "k_max = " << c.k_max << "\n";
  o << "theta = " << shortest(c.theta) << "\n";
  o << "ell_max = " << c.ell_max << "\n";
  o << "det_floor_rel = " << shortest(c.det_floor_rel) << "\n";
  o << "increment_form = " << c.increment_form << "\n";
  o << "init_p = " << c.init_p << "\n";
  o << "init_q = " << c.init_q << "\n";
  o << "\n[forward]\n";
  o << "newton_tol = " << shortest(c.newton_tol) << "\n";
  o << "newton_max_iter = " << c.newton_max_iter << "\n";
  o << "steady_distance = " << (c.steady_distance ? "true" : "false") << "\n";
  o << "\n[probe]\n";
  o << "rho = " << shortest(c.rho) << "\n";
  o << "samples = " << c.probe_samples << "\n";
  o << "\n[output]\n";
  o << "dir = " << c.out_dir << "\n";
  return o.str();
}

}  // namespace fracrd
