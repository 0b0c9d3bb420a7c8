#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "fracrd/config.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "experiment file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out_dir, "output directory (overrides the config)");
  sub->add_option("--seed", opts.seed, "noise and probe seed (overrides the config)")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
}

fracrd::ExperimentConfig resolve_config(const CommonOptions& opts) {
  fracrd::ExperimentConfig cfg =
      opts.config_path.empty() ? fracrd::ExperimentConfig{} : fracrd::load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed_given) cfg.seed = opts.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forward solves and coefficient reconstruction for the time-fractional "
               "reaction-diffusion model"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string sweep_param;

  CLI::App* forward = app.add_subcommand("forward", "solve one run at the exact coefficients");
  add_common(forward, opts);
  CLI::App* steady = app.add_subcommand("steady", "solve the steady problem of run 1");
  add_common(steady, opts);
  CLI::App* invert = app.add_subcommand("invert", "reconstruct the coefficients from data");
  add_common(invert, opts);
  CLI::App* sweep = app.add_subcommand("sweep", "rerun the inversion over a parameter range");
  add_common(sweep, opts);
  sweep->add_option("--param", sweep_param, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"alpha", "noise"}));
  CLI::App* probe =
      app.add_subcommand("probe-contraction", "update-map contraction study near the truth");
  add_common(probe, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const fracrd::ExperimentConfig cfg = resolve_config(opts);
    if (app.got_subcommand(forward)) fracrd::run_forward(cfg);
    if (app.got_subcommand(steady)) fracrd::run_steady(cfg);
    if (app.got_subcommand(invert)) fracrd::run_invert(cfg);
    if (app.got_subcommand(sweep))
      fracrd::run_sweep(cfg, sweep_param == "alpha" ? fracrd::SweepParam::Alpha
                                                    : fracrd::SweepParam::Noise);
    if (app.got_subcommand(probe)) fracrd::run_probe(cfg);
  } catch (const fracrd::DegenerateObservations& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const fracrd::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
