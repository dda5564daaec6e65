#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfguided/core.hpp"

namespace selfguided {

// One row of a per-run convergence trace.  Row 0 carries only the metric
// of the initial estimate; row k >= 1 also records the step that produced
// sigma_k.  Optional fields stay empty when inapplicable.
struct TraceRow {
  std::uint64_t k = 0;
  double metric = 0.0;
  std::optional<double> f_plus;
  std::optional<double> f_minus;
  std::optional<double> g_k;
  std::optional<double> alpha_k;
  std::optional<double> beta_k;
  std::optional<std::uint64_t> n_plus;
  std::optional<std::uint64_t> n_minus;
};

struct RunTrace {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  std::string variant;
  std::vector<TraceRow> rows;
  std::uint64_t skipped_steps = 0;  // zero-count Poisson iterations
};

// 1 - |<truth|estimate>|^2 (normalized fidelity).
double infidelity(const ComplexState& truth, const ComplexState& estimate);

// 1 - <O|normalize(sigma)>; a zero estimate carries no information and
// maps to 1.
double image_error(const ImageVector& object, const ImageVector& estimate);

struct AggregateRow {
  std::uint64_t k = 0;
  double mean = 0.0;
  double std_dev = 0.0;       // n-1 denominator
  double standard_error = 0.0;
  std::size_t n = 0;
};

// Per-iteration sample statistics across runs.  Traces must agree in
// length and variant.
std::vector<AggregateRow> aggregate(const std::vector<RunTrace>& traces);

// Smallest k whose mean metric is below the threshold; nullopt if never.
std::optional<std::uint64_t> threshold_crossing(
    const std::vector<AggregateRow>& aggregated, double threshold);

}  // namespace selfguided
