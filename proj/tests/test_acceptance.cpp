// End-to-end acceptance gate.  Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "selfguided/config.hpp"
#include "selfguided/core.hpp"
#include "selfguided/experiment.hpp"
#include "selfguided/generators.hpp"
#include "selfguided/measurement.hpp"
#include "selfguided/metrics.hpp"
#include "selfguided/reconstruction.hpp"
#include "selfguided/rng.hpp"
#include "selfguided/tomography.hpp"

using namespace selfguided;
namespace fs = std::filesystem;

namespace {

constexpr int kJobs = 8;

int failures = 0;

void report(int id, bool passed, const std::string& detail) {
  std::printf("criterion %2d: %s — %s\n", id, passed ? "PASS" : "FAIL", detail.c_str());
  if (!passed) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

const VariantResult& variant_result(const LevelResult& level, const std::string& name) {
  for (const auto& v : level.variants)
    if (v.variant == name) return v;
  throw std::runtime_error("missing variant " + name);
}

// --- criteria 1 and 2: SPI and SGI agree per iteration -------------------

void check_equivalence(int id, const char* preset, double budget_seconds) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(resolve_config(preset), kJobs);
  const double elapsed = seconds_since(start);
  const double diff = result.levels.at(0).max_pair_diff.value_or(1.0);
  const bool in_bound = diff < 1e-11;
  const bool in_time = elapsed < budget_seconds;
  report(id, in_bound && in_time,
         std::string(preset) + ": max |error_spi - error_sgi| = " + fmt(diff) +
             " (bound 1e-11), " + fmt(elapsed) + " s (budget " + fmt(budget_seconds) +
             " s)");
}

// --- criterion 3: complete Hadamard basis is exact -----------------------

void check_completeness() {
  const ExperimentResult result =
      run_experiment(resolve_config("spi-hadamard-complete"), kJobs);
  const RunTrace& trace = variant_result(result.levels.at(0), "spi").traces.at(0);
  const TraceRow& last = trace.rows.back();
  report(3, last.k == 4096 && last.metric < 1e-10,
         "noiseless SPI, full order-4096 Hadamard basis: image_error = " +
             fmt(last.metric) + " at k=" + std::to_string(last.k) + " (bound 1e-10)");
}

// --- criterion 4: the truth is a fixed point of the corrected step -------

void check_fixed_point() {
  CounterRng rng(404);
  QuantumOracle oracle(random_oam_state(5, rng), NoiseModel::none(), 404);
  TomographyConfig config;
  config.dim = 5;
  config.iterations = 100;
  config.variant = TomographyVariant::Osgqt;
  config.schedule = Schedule::constant(0.05, 0.2);
  config.seed = 404;
  const RunTrace trace = run_tomography_from(config, oracle, oracle.truth());
  double worst = 0.0;
  for (const auto& row : trace.rows) worst = std::max(worst, row.metric);
  report(4, worst < 1e-12,
         "osgqt from sigma_0 = psi, 100 noiseless iterations: max infidelity = " +
             fmt(worst) + " (bound 1e-12)");
}

// --- criteria 5 and 6: headline noiseless convergence --------------------

void check_headline() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result =
      run_experiment(resolve_config("tomography-noiseless"), kJobs);
  const double elapsed = seconds_since(start);
  const LevelResult& level = result.levels.at(0);
  const VariantResult& sgqt = variant_result(level, "sgqt");
  const VariantResult& osgqt = variant_result(level, "osgqt");

  bool dominated = true;
  for (std::size_t i = 0; i < sgqt.curve.size(); ++i)
    if (sgqt.curve[i].k >= 200 && !(osgqt.curve[i].mean < sgqt.curve[i].mean))
      dominated = false;

  const bool osgqt_ok = osgqt.final_mean <= 0.025;
  const bool sgqt_ok = sgqt.final_mean >= 0.02 && sgqt.final_mean <= 0.10;
  const bool in_time = elapsed < 60.0;
  report(5, osgqt_ok && sgqt_ok && dominated && in_time,
         "d=5, alpha=0.05, beta=0.2, R=100, K=350: osgqt mean = " +
             fmt(osgqt.final_mean) + " (<= 0.025), sgqt mean = " + fmt(sgqt.final_mean) +
             " (in [0.02, 0.10]), osgqt below sgqt at every k >= 200: " +
             (dominated ? "yes" : "no") + ", " + fmt(elapsed) + " s (budget 60 s)");

  const bool both_cross = sgqt.crossing_0p1 && osgqt.crossing_0p1;
  const bool faster = both_cross && *osgqt.crossing_0p1 < *sgqt.crossing_0p1;
  report(6, faster,
         "mean-curve 0.1 crossings: osgqt k=" +
             (osgqt.crossing_0p1 ? std::to_string(*osgqt.crossing_0p1) : "never") +
             ", sgqt k=" +
             (sgqt.crossing_0p1 ? std::to_string(*sgqt.crossing_0p1) : "never") +
             " (osgqt strictly earlier)");
}

// --- criterion 7: Poisson-noise ordering ---------------------------------

void check_poisson_ordering() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(resolve_config("noise-sweep"), kJobs);
  const double elapsed = seconds_since(start);

  double sgqt_long = 0.0, sgqt_short = 0.0, osgqt_long = 0.0, osgqt_short = 0.0;
  for (const auto& level : result.levels) {
    const double integration = level.integration_time.value_or(0.0);
    const double sgqt = variant_result(level, "sgqt").final_mean;
    const double osgqt = variant_result(level, "osgqt").final_mean;
    if (integration == 1.0) {
      sgqt_long = sgqt;
      osgqt_long = osgqt;
    } else {
      sgqt_short = sgqt;
      osgqt_short = osgqt;
    }
  }
  const bool osgqt_wins = osgqt_long < sgqt_long && osgqt_short < sgqt_short;
  const bool noise_hurts = sgqt_short >= sgqt_long && osgqt_short >= osgqt_long;
  const bool in_time = elapsed < 300.0;
  report(7, osgqt_wins && noise_hurts && in_time,
         "C_exp=5e3/s: I=1 s means (sgqt " + fmt(sgqt_long) + ", osgqt " +
             fmt(osgqt_long) + "), I=0.1 s means (sgqt " + fmt(sgqt_short) +
             ", osgqt " + fmt(osgqt_short) + "); osgqt below sgqt at both, " +
             "shorter exposure never better, " + fmt(elapsed) + " s (budget 300 s)");
}

// --- criterion 8: the Kaczmarz step annihilates the residual -------------

void check_kaczmarz_residual() {
  CounterRng rng(808);
  const ImageVector object = test_image("disk", 16, 16);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Mask delta = random_sign_mask(16, 16, rng);
    ImageVector sigma(16, 16);
    for (auto& p : sigma.pixels) p = rng.gaussian();
    const double y = linear_overlap(object, delta.as_image());
    const ImageVector next = ogi_step(sigma, y, delta, true);
    worst = std::max(worst, std::fabs(linear_overlap(next, delta.as_image()) - y));
  }
  report(8, worst < 1e-12,
         "1000 random (sigma, Delta) pairs: max |<sigma'|Delta> - y| = " + fmt(worst) +
             " (bound 1e-12)");
}

// --- criterion 9: the covariance estimator collapses on centered data ----

void check_ghost_equivalence() {
  CounterRng rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<ImagingMeasurement> ms;
    for (int p = 0; p < 6; ++p) {
      // pairing each mask and value with its negation pre-centres both
      Mask m = random_sign_mask(4, 4, rng);
      Mask neg = m;
      for (auto& e : neg.entries) e = -e;
      const double y = rng.gaussian();
      ms.push_back({m, y, static_cast<std::size_t>(2 * p)});
      ms.push_back({neg, -y, static_cast<std::size_t>(2 * p + 1)});
    }
    const ImageVector cov = ghost_estimate(ms);
    ImageVector simple(4, 4);
    for (const auto& m : ms)
      for (std::size_t i = 0; i < simple.size(); ++i)
        simple[i] += m.value * m.mask[i] / static_cast<double>(ms.size());
    for (std::size_t i = 0; i < simple.size(); ++i)
      worst = std::max(worst, std::fabs(cov[i] - simple[i]));
  }
  report(9, worst < 1e-12,
         "1000 centered measurement sets: max per-pixel |covariance - (1/N) sum y Delta| = " +
             fmt(worst) + " (bound 1e-12)");
}

// --- criterion 10: count-estimator identities ----------------------------

void check_count_identities() {
  CounterRng rng(1010);
  const double beta = 0.2;
  bool sum_exact = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    CountPair c{rng.uniform_below(100000), rng.uniform_below(100000)};
    if (c.n_plus + c.n_minus == 0) c.n_plus = 1;
    const FidelityPair f = fidelity_from_counts(c);
    if (f.f_plus + f.f_minus != 2.0) sum_exact = false;
    const double direct =
        (static_cast<double>(c.n_plus) - static_cast<double>(c.n_minus)) /
        (beta * static_cast<double>(c.n_plus + c.n_minus));
    worst = std::max(worst, std::fabs(spsa_gradient(f.f_plus, f.f_minus, beta) - direct));
  }
  report(10, sum_exact && worst < 1e-12,
         "1e5 random count pairs: f+ + f- = 2 " +
             std::string(sum_exact ? "exactly" : "VIOLATED") +
             ", max gradient-identity error = " + fmt(worst) + " (bound 1e-12)");
}

// --- criterion 11: byte-identical reruns at parallelism 1 and 8 ----------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void check_determinism() {
  const fs::path base = fs::temp_directory_path() / "selfguided_acceptance";
  const fs::path dir_a = base / "jobs1";
  const fs::path dir_b = base / "jobs8";
  fs::remove_all(base);

  ExperimentConfig cfg = resolve_config("tomography-noiseless");
  cfg.output = dir_a.string();
  write_experiment(run_experiment(cfg, 1));
  cfg.output = dir_b.string();
  write_experiment(run_experiment(cfg, 8));

  std::size_t files = 0;
  std::size_t mismatches = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    ++files;
    const fs::path other = dir_b / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++mismatches;
  }
  for (const auto& entry : fs::directory_iterator(dir_b))
    if (!fs::exists(dir_a / entry.path().filename())) ++mismatches;

  report(11, files > 0 && mismatches == 0,
         "tomography-noiseless at jobs 1 vs jobs 8: " + std::to_string(files) +
             " output files compared, " + std::to_string(mismatches) + " mismatches");
  fs::remove_all(base);
}

}  // namespace

int main() {
  check_equivalence(1, "spi-vs-sgi", 30.0);
  check_equivalence(2, "spi-vs-sgi-hadamard", 60.0);
  check_completeness();
  check_fixed_point();
  check_headline();
  check_poisson_ordering();
  check_kaczmarz_residual();
  check_ghost_equivalence();
  check_count_identities();
  check_determinism();

  if (failures == 0)
    std::printf("all 11 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
