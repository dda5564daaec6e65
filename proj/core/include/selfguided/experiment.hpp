#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfguided/config.hpp"
#include "selfguided/metrics.hpp"

namespace selfguided {

struct VariantResult {
  std::string variant;
  std::vector<RunTrace> traces;          // one per run, ordered by run_id
  std::vector<AggregateRow> curve;
  double final_mean = 0.0;
  double final_std = 0.0;
  double final_se = 0.0;
  std::optional<std::uint64_t> crossing_0p1;
  std::uint64_t skipped_steps = 0;
};

// All variants evaluated at one noise level (one integration time for
// Poisson sweeps; a single level otherwise).
struct LevelResult {
  std::optional<double> integration_time;
  std::vector<VariantResult> variants;
  // max_k |metric_a - metric_b| across runs, when exactly two variants ran
  std::optional<double> max_pair_diff;
};

struct AssertionOutcome {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::uint64_t> seeds;  // derived per-run seeds
  std::vector<LevelResult> levels;
  std::vector<AssertionOutcome> assertions;
};

// Executes every (level, run) of the config across `jobs` workers.  The
// result is independent of `jobs`: each run owns its RNG streams and the
// reduction is ordered by run_id.
ExperimentResult run_experiment(const ExperimentConfig& config, int jobs = 1);

// Writes per-run trace CSVs, aggregated curve CSVs and summary.json into
// config.output.  Byte-identical for identical (config, seed, version).
// Throws AssertionError after writing when an embedded assertion fails.
void write_experiment(const ExperimentResult& result);

// run_experiment + write_experiment.
ExperimentResult run_experiment_to_files(const ExperimentConfig& config, int jobs = 1);

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  std::string variant;
  double final_mean = 0.0;
  double final_std = 0.0;
  double final_se = 0.0;
};

struct SweepResult {
  ExperimentConfig base_config;
  std::vector<SweepCell> cells;  // ordered alpha-major, beta, then variant
  // per-variant best cell index into `cells`
  std::vector<std::size_t> best_cells;
};

// Runs every (alpha, beta) grid point of config.alphas x config.betas for
// all variants and identifies the best mean final metric per variant.
SweepResult grid_sweep(const ExperimentConfig& config, int jobs = 1);

void write_sweep(const SweepResult& result);

// CSV helpers (exact schemas; LF endings; round-trip double formatting).
void write_trace_csv(const std::string& path, const RunTrace& trace,
                     const std::string& config_hash);
void write_curve_csv(const std::string& path, const std::vector<AggregateRow>& curve,
                     const std::string& config_hash);

// Reads the "# config=<hash>" line of an output file.
std::string read_embedded_hash(const std::string& path);

}  // namespace selfguided
