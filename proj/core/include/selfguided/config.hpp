#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfguided/generators.hpp"
#include "selfguided/measurement.hpp"
#include "selfguided/tomography.hpp"

namespace selfguided {

inline constexpr const char* kToolVersion = "0.1.0";

// Bad configuration (unknown key, invalid value, unknown preset) -> exit 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A preset assertion failed after an otherwise successful run -> exit 3.
struct AssertionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentMode { Imaging, Tomography };

// Declarative description of an experiment, read from a flat key=value
// file ('#' starts a comment).  See docs/config.md for the schema.
struct ExperimentConfig {
  std::string name;
  ExperimentMode mode = ExperimentMode::Tomography;
  std::vector<std::string> variants;  // spi|sgi|ogi or sgqt|osgqt

  // tomography
  std::size_t dim = 5;
  StateMode state_mode = StateMode::PhaseOnly;

  // imaging
  int width = 64;
  int height = 64;
  std::string image = "disk";  // preset name or file:<path.pgm>
  std::string masks = "random";  // random | hadamard
  bool ogi_normalized = true;

  std::uint64_t iterations = 350;
  std::uint64_t runs = 100;
  Schedule schedule;

  NoiseKind noise = NoiseKind::None;
  double gamma = 0.25;
  double rate = 5000.0;
  std::vector<double> integration_times{1.0};

  std::uint64_t seed = 1;
  std::string output = "out";

  // sweep grids (used by the sweep entry point only)
  std::vector<double> alphas;
  std::vector<double> betas;

  // optional embedded assertions
  std::optional<double> assert_pair_diff_below;
  std::optional<double> assert_final_error_below;
  std::map<std::string, double> assert_final_mean_below;  // per variant

  // Canonical key=value text (stable key order) and a 64-bit hash of it;
  // every output file embeds the hash so mixed-config data is detectable.
  std::string canonical_text() const;
  std::string config_hash() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Built-in presets; each is a complete config file shipped as text.
std::vector<std::string> preset_names();
const std::string& preset_text(const std::string& name);

// Resolves a CLI argument: a preset name, or else a path to a config file.
ExperimentConfig resolve_config(const std::string& name_or_path);

}  // namespace selfguided
