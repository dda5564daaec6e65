#include "selfguided/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace selfguided {

double infidelity(const ComplexState& truth, const ComplexState& estimate) {
  return 1.0 - fidelity(truth, estimate);
}

double image_error(const ImageVector& object, const ImageVector& estimate) {
  if (object.size() != estimate.size())
    throw std::invalid_argument("image_error: dimension mismatch");
  if (norm_squared(estimate) == 0.0) return 1.0;
  return 1.0 - linear_overlap(object, normalize(estimate));
}

std::vector<AggregateRow> aggregate(const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  const std::size_t len = traces.front().rows.size();
  const std::string& variant = traces.front().variant;
  for (const auto& t : traces) {
    if (t.rows.size() != len)
      throw std::invalid_argument("aggregate: ragged trace lengths");
    if (t.variant != variant)
      throw std::invalid_argument("aggregate: mixed variants");
  }
  const double n = static_cast<double>(traces.size());
  std::vector<AggregateRow> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& t : traces) sum += t.rows[i].metric;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : traces) {
      const double d = t.rows[i].metric - mean;
      ss += d * d;
    }
    AggregateRow& row = out[i];
    row.k = traces.front().rows[i].k;
    row.mean = mean;
    row.std_dev = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    row.standard_error = row.std_dev / std::sqrt(n);
    row.n = traces.size();
  }
  return out;
}

std::optional<std::uint64_t> threshold_crossing(
    const std::vector<AggregateRow>& aggregated, double threshold) {
  for (const auto& row : aggregated)
    if (row.mean < threshold) return row.k;
  return std::nullopt;
}

}  // namespace selfguided
