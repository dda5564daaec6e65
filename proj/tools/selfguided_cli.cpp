// Command-line front end: run experiment presets/configs, grid sweeps,
// list built-in presets.  Exit codes: 0 ok, 1 config error, 2 runtime
// error, 3 embedded assertion failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "selfguided/config.hpp"
#include "selfguided/experiment.hpp"

namespace {

void apply_overrides(selfguided::ExperimentConfig& cfg,
                     const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& output) {
  if (seed) cfg.seed = *seed;
  if (output) cfg.output = *output;
}

void print_experiment(const selfguided::ExperimentResult& result) {
  for (const auto& level : result.levels) {
    std::string tag;
    if (level.integration_time)
      tag = " [I=" + std::to_string(*level.integration_time) + "s]";
    for (const auto& vr : level.variants) {
      std::printf("%-8s%s final mean metric %.6g (se %.3g, %zu runs)\n",
                  vr.variant.c_str(), tag.c_str(), vr.final_mean, vr.final_se,
                  vr.traces.size());
    }
    if (level.max_pair_diff)
      std::printf("max per-iteration pair difference%s: %.3g\n", tag.c_str(),
                  *level.max_pair_diff);
  }
  for (const auto& a : result.assertions)
    std::printf("assert %-24s %s (value %.6g, bound %.6g)\n", a.name.c_str(),
                a.passed ? "PASS" : "FAIL", a.value, a.bound);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-guided tomography and single-pixel imaging simulator"};
  app.require_subcommand(1);

  std::string config_arg;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> output_override;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_arg, "Preset name or config file path")->required();
    cmd->add_option("--seed", seed_override, "Override the base seed");
    cmd->add_option("--output", output_override, "Override the output directory");
    cmd->add_option("--jobs", jobs, "Worker threads (affects wall time only)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment");
  add_common(run_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run an alpha/beta grid sweep");
  add_common(sweep_cmd);

  CLI::App* presets_cmd = app.add_subcommand("presets", "Inspect built-in presets");
  CLI::App* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
  std::string show_name;
  CLI::App* show_cmd = presets_cmd->add_subcommand("show", "Print a preset config file");
  show_cmd->add_option("name", show_name, "Preset name")->required();
  presets_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& name : selfguided::preset_names()) std::cout << name << "\n";
      return 0;
    }
    if (show_cmd->parsed()) {
      std::cout << selfguided::preset_text(show_name);
      return 0;
    }

    selfguided::ExperimentConfig cfg = selfguided::resolve_config(config_arg);
    apply_overrides(cfg, seed_override, output_override);

    if (run_cmd->parsed()) {
      selfguided::ExperimentResult result;
      try {
        result = selfguided::run_experiment_to_files(cfg, jobs);
      } catch (const selfguided::AssertionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
      }
      print_experiment(result);
      std::printf("results written to %s\n", cfg.output.c_str());
      return 0;
    }

    // sweep
    selfguided::SweepResult sweep = selfguided::grid_sweep(cfg, jobs);
    selfguided::write_sweep(sweep);
    for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
      const auto& c = sweep.cells[sweep.best_cells[i]];
      std::printf("best %-8s alpha=%g beta=%g final mean %.6g (se %.3g)\n",
                  c.variant.c_str(), c.alpha, c.beta, c.final_mean, c.final_se);
    }
    std::printf("results written to %s\n", cfg.output.c_str());
    return 0;
  } catch (const selfguided::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
