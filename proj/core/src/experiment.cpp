#include "selfguided/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <functional>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "selfguided/reconstruction.hpp"
#include "selfguided/tomography.hpp"

namespace selfguided {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

std::string fmt_opt(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Stream tags keep the per-run substreams (masks, truth, oracle noise)
// statistically independent.
constexpr std::uint64_t kMaskTag = 0x6d61736bULL;
constexpr std::uint64_t kTruthTag = 0x74727574ULL;
constexpr std::uint64_t kOracleTag = 0x6f72636cULL;

std::vector<Mask> build_masks(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  std::vector<Mask> masks;
  masks.reserve(cfg.iterations);
  if (cfg.masks == "hadamard") {
    const int order = cfg.width * cfg.height;
    if (cfg.iterations > static_cast<std::uint64_t>(order))
      throw ConfigError("config: hadamard mask count cannot exceed width*height");
    for (std::uint64_t k = 0; k < cfg.iterations; ++k)
      masks.push_back(hadamard_mask(order, static_cast<int>(k), cfg.width, cfg.height));
  } else {
    CounterRng rng(mix64(run_seed ^ kMaskTag));
    for (std::uint64_t k = 0; k < cfg.iterations; ++k)
      masks.push_back(random_sign_mask(cfg.width, cfg.height, rng));
  }
  return masks;
}

ImageVector build_object(const ExperimentConfig& cfg) {
  if (cfg.image.rfind("file:", 0) == 0) return load_pgm(cfg.image.substr(5));
  return test_image(cfg.image, cfg.width, cfg.height);
}

NoiseModel level_noise(const ExperimentConfig& cfg, double integration_time) {
  switch (cfg.noise) {
    case NoiseKind::None: return NoiseModel::none();
    case NoiseKind::Gaussian: return NoiseModel::gaussian(cfg.gamma);
    case NoiseKind::Poisson: return NoiseModel::poisson(cfg.rate, integration_time);
  }
  throw std::logic_error("unreachable noise kind");
}

// All variant traces for one (level, run) cell.
std::vector<RunTrace> run_cell(const ExperimentConfig& cfg, double integration_time,
                               std::uint64_t run, const ImageVector* object) {
  const std::uint64_t run_seed = derive_seed(cfg.seed, run);
  const NoiseModel noise = level_noise(cfg, integration_time);
  std::vector<RunTrace> traces;

  if (cfg.mode == ExperimentMode::Imaging) {
    const std::vector<Mask> masks = build_masks(cfg, run_seed);
    // one oracle seed per run: spi/sgi/ogi consume the identical n_k stream
    const ImagingOracle oracle(*object, noise, mix64(run_seed ^ kOracleTag));
    for (const auto& v : cfg.variants) {
      RunTrace trace;
      if (v == "spi") {
        trace = run_spi(oracle, masks, SpiVariant::Spi);
      } else if (v == "ogi") {
        trace = run_spi(oracle, masks, SpiVariant::Ogi, cfg.ogi_normalized);
      } else {
        TomographyConfig tc;
        tc.dim = masks.front().size();
        tc.iterations = cfg.iterations;
        tc.variant = TomographyVariant::Sgi;
        tc.schedule = cfg.schedule;
        tc.seed = run_seed;
        trace = run_sgi(tc, oracle, masks);
      }
      trace.run_id = run;
      trace.seed = run_seed;
      traces.push_back(std::move(trace));
    }
    return traces;
  }

  CounterRng truth_rng(mix64(run_seed ^ kTruthTag));
  const ComplexState truth = random_oam_state(cfg.dim, truth_rng, cfg.state_mode);
  for (const auto& v : cfg.variants) {
    TomographyConfig tc;
    tc.dim = cfg.dim;
    tc.iterations = cfg.iterations;
    tc.variant = v == "sgqt" ? TomographyVariant::Sgqt : TomographyVariant::Osgqt;
    tc.schedule = cfg.schedule;
    tc.seed = run_seed;
    tc.state_mode = cfg.state_mode;
    // fresh oracle per variant with the same seed: identical noise streams
    QuantumOracle oracle(truth, noise, mix64(run_seed ^ kOracleTag));
    RunTrace trace = run_tomography(tc, oracle);
    trace.run_id = run;
    traces.push_back(std::move(trace));
  }
  return traces;
}

void finalize_variant(VariantResult& vr) {
  vr.curve = aggregate(vr.traces);
  const AggregateRow& last = vr.curve.back();
  vr.final_mean = last.mean;
  vr.final_std = last.std_dev;
  vr.final_se = last.standard_error;
  vr.crossing_0p1 = threshold_crossing(vr.curve, 0.1);
  for (const auto& t : vr.traces) vr.skipped_steps += t.skipped_steps;
}

std::optional<double> pair_diff(const LevelResult& level) {
  if (level.variants.size() != 2) return std::nullopt;
  const auto& a = level.variants[0].traces;
  const auto& b = level.variants[1].traces;
  double max_diff = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t i = 0; i < a[r].rows.size(); ++i)
      max_diff = std::max(max_diff,
                          std::fabs(a[r].rows[i].metric - b[r].rows[i].metric));
  return max_diff;
}

std::string level_suffix(const ExperimentConfig& cfg, const LevelResult& level) {
  if (cfg.noise != NoiseKind::Poisson || !level.integration_time) return "";
  return "_I" + fmt(*level.integration_time);
}

void evaluate_assertions(ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  for (const auto& level : result.levels) {
    const std::string suffix = level_suffix(cfg, level);
    if (cfg.assert_pair_diff_below) {
      if (!level.max_pair_diff)
        throw ConfigError("config: assert_pair_diff_below needs exactly two variants");
      result.assertions.push_back({"pair_diff" + suffix, *level.max_pair_diff,
                                   *cfg.assert_pair_diff_below,
                                   *level.max_pair_diff < *cfg.assert_pair_diff_below});
    }
    for (const auto& vr : level.variants) {
      if (cfg.assert_final_error_below) {
        double worst = 0.0;
        for (const auto& t : vr.traces)
          worst = std::max(worst, t.rows.back().metric);
        result.assertions.push_back({"final_error_" + vr.variant + suffix, worst,
                                     *cfg.assert_final_error_below,
                                     worst < *cfg.assert_final_error_below});
      }
      auto it = cfg.assert_final_mean_below.find(vr.variant);
      if (it != cfg.assert_final_mean_below.end())
        result.assertions.push_back({"final_mean_" + vr.variant + suffix, vr.final_mean,
                                     it->second, vr.final_mean < it->second});
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int jobs) {
  ExperimentResult result;
  result.config = config;
  for (std::uint64_t r = 0; r < config.runs; ++r)
    result.seeds.push_back(derive_seed(config.seed, r));

  ImageVector object;
  if (config.mode == ExperimentMode::Imaging) object = build_object(config);

  const std::vector<double> levels =
      config.noise == NoiseKind::Poisson ? config.integration_times
                                         : std::vector<double>{0.0};

  for (double integration_time : levels) {
    LevelResult level;
    if (config.noise == NoiseKind::Poisson) level.integration_time = integration_time;
    for (const auto& v : config.variants) {
      VariantResult vr;
      vr.variant = v;
      vr.traces.resize(config.runs);
      level.variants.push_back(std::move(vr));
    }

    parallel_for(config.runs, jobs, [&](std::size_t run) {
      std::vector<RunTrace> traces = run_cell(
          config, integration_time, run,
          config.mode == ExperimentMode::Imaging ? &object : nullptr);
      for (std::size_t v = 0; v < traces.size(); ++v)
        level.variants[v].traces[run] = std::move(traces[v]);
    });

    for (auto& vr : level.variants) finalize_variant(vr);
    level.max_pair_diff = pair_diff(level);
    result.levels.push_back(std::move(level));
  }

  evaluate_assertions(result);
  return result;
}

void write_trace_csv(const std::string& path, const RunTrace& trace,
                     const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "# config=" << config_hash << "\n";
  out << "run_id,seed,variant,k,metric,f_plus,f_minus,g_k,alpha_k,beta_k,n_plus,n_minus\n";
  for (const auto& row : trace.rows) {
    out << trace.run_id << ',' << trace.seed << ',' << trace.variant << ','
        << row.k << ',' << fmt(row.metric) << ',' << fmt_opt(row.f_plus) << ','
        << fmt_opt(row.f_minus) << ',' << fmt_opt(row.g_k) << ','
        << fmt_opt(row.alpha_k) << ',' << fmt_opt(row.beta_k) << ','
        << fmt_opt(row.n_plus) << ',' << fmt_opt(row.n_minus) << '\n';
  }
  if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

void write_curve_csv(const std::string& path, const std::vector<AggregateRow>& curve,
                     const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "# config=" << config_hash << "\n";
  out << "k,mean,std,se,n\n";
  for (const auto& row : curve)
    out << row.k << ',' << fmt(row.mean) << ',' << fmt(row.std_dev) << ','
        << fmt(row.standard_error) << ',' << row.n << '\n';
  if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

std::string read_embedded_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  const std::string prefix = "# config=";
  if (line.rfind(prefix, 0) != 0)
    throw std::runtime_error("'" + path + "' has no embedded config hash");
  return line.substr(prefix.size());
}

void write_experiment(const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  const std::string hash = cfg.config_hash();
  fs::create_directories(cfg.output);

  nlohmann::ordered_json summary;
  summary["tool_version"] = kToolVersion;
  summary["config_hash"] = hash;
  summary["config"] = cfg.canonical_text();
  summary["base_seed"] = cfg.seed;
  summary["seeds"] = result.seeds;

  nlohmann::ordered_json levels_json = nlohmann::ordered_json::array();
  for (const auto& level : result.levels) {
    const std::string suffix = level_suffix(cfg, level);
    nlohmann::ordered_json level_json;
    if (level.integration_time)
      level_json["integration_time"] = *level.integration_time;
    nlohmann::ordered_json variants_json = nlohmann::ordered_json::array();
    for (const auto& vr : level.variants) {
      for (const auto& trace : vr.traces) {
        const std::string trace_path =
            (fs::path(cfg.output) / ("trace_" + vr.variant + suffix + "_run" +
                                     std::to_string(trace.run_id) + ".csv"))
                .string();
        write_trace_csv(trace_path, trace, hash);
      }
      write_curve_csv(
          (fs::path(cfg.output) / ("curve_" + vr.variant + suffix + ".csv")).string(),
          vr.curve, hash);

      nlohmann::ordered_json vj;
      vj["variant"] = vr.variant;
      vj["final_mean"] = vr.final_mean;
      vj["final_std"] = vr.final_std;
      vj["final_se"] = vr.final_se;
      if (vr.crossing_0p1)
        vj["crossing_0.1"] = *vr.crossing_0p1;
      else
        vj["crossing_0.1"] = nullptr;
      vj["skipped_steps"] = vr.skipped_steps;
      variants_json.push_back(std::move(vj));
    }
    level_json["variants"] = std::move(variants_json);
    if (level.max_pair_diff) level_json["max_pair_diff"] = *level.max_pair_diff;
    levels_json.push_back(std::move(level_json));
  }
  summary["levels"] = std::move(levels_json);

  nlohmann::ordered_json assertions_json = nlohmann::ordered_json::array();
  bool all_passed = true;
  for (const auto& a : result.assertions) {
    nlohmann::ordered_json aj;
    aj["name"] = a.name;
    aj["value"] = a.value;
    aj["bound"] = a.bound;
    aj["passed"] = a.passed;
    assertions_json.push_back(std::move(aj));
    all_passed = all_passed && a.passed;
  }
  summary["assertions"] = std::move(assertions_json);

  std::ofstream out(fs::path(cfg.output) / "summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write summary.json");
  out << summary.dump(2) << "\n";
  out.close();

  if (!all_passed) {
    std::string failed;
    for (const auto& a : result.assertions)
      if (!a.passed)
        failed += (failed.empty() ? "" : ", ") + a.name + " (value " + fmt(a.value) +
                  ", bound " + fmt(a.bound) + ")";
    throw AssertionError("preset assertion failed: " + failed);
  }
}

ExperimentResult run_experiment_to_files(const ExperimentConfig& config, int jobs) {
  ExperimentResult result = run_experiment(config, jobs);
  write_experiment(result);
  return result;
}

SweepResult grid_sweep(const ExperimentConfig& config, int jobs) {
  if (config.alphas.empty() || config.betas.empty())
    throw ConfigError("sweep: alphas and betas must be nonempty");
  if (config.noise == NoiseKind::Poisson && config.integration_times.size() != 1)
    throw ConfigError("sweep: a single integration_time is required");

  SweepResult sweep;
  sweep.base_config = config;
  for (double alpha : config.alphas) {
    for (double beta : config.betas) {
      ExperimentConfig cell_cfg = config;
      cell_cfg.schedule = Schedule::constant(alpha, beta);
      cell_cfg.alphas.clear();
      cell_cfg.betas.clear();
      ExperimentResult r = run_experiment(cell_cfg, jobs);
      for (const auto& vr : r.levels.front().variants) {
        SweepCell cell;
        cell.alpha = alpha;
        cell.beta = beta;
        cell.variant = vr.variant;
        cell.final_mean = vr.final_mean;
        cell.final_std = vr.final_std;
        cell.final_se = vr.final_se;
        sweep.cells.push_back(cell);
      }
    }
  }
  for (const auto& v : config.variants) {
    std::size_t best = sweep.cells.size();
    for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
      if (sweep.cells[i].variant != v) continue;
      if (best == sweep.cells.size() ||
          sweep.cells[i].final_mean < sweep.cells[best].final_mean)
        best = i;
    }
    sweep.best_cells.push_back(best);
  }
  return sweep;
}

void write_sweep(const SweepResult& result) {
  const ExperimentConfig& cfg = result.base_config;
  const std::string hash = cfg.config_hash();
  fs::create_directories(cfg.output);

  std::ofstream csv(fs::path(cfg.output) / "sweep.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write sweep.csv");
  csv << "# config=" << hash << "\n";
  csv << "alpha,beta,variant,final_mean,final_std,final_se\n";
  for (const auto& c : result.cells)
    csv << fmt(c.alpha) << ',' << fmt(c.beta) << ',' << c.variant << ','
        << fmt(c.final_mean) << ',' << fmt(c.final_std) << ',' << fmt(c.final_se)
        << '\n';

  nlohmann::ordered_json summary;
  summary["tool_version"] = kToolVersion;
  summary["config_hash"] = hash;
  summary["config"] = cfg.canonical_text();
  nlohmann::ordered_json best = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
    const SweepCell& c = result.cells[result.best_cells[i]];
    nlohmann::ordered_json bj;
    bj["variant"] = c.variant;
    bj["alpha"] = c.alpha;
    bj["beta"] = c.beta;
    bj["final_mean"] = c.final_mean;
    bj["final_se"] = c.final_se;
    best.push_back(std::move(bj));
  }
  summary["best"] = std::move(best);
  std::ofstream out(fs::path(cfg.output) / "sweep_summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write sweep_summary.json");
  out << summary.dump(2) << "\n";
}

}  // namespace selfguided
