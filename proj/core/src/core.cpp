#include "selfguided/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selfguided {

Complex inner_product(const ComplexState& a, const ComplexState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner_product: dimension mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm_squared(const ComplexState& v) {
  double acc = 0.0;
  for (const auto& c : v.amplitudes) acc += std::norm(c);
  return acc;
}

double norm_squared(const ImageVector& v) {
  double acc = 0.0;
  for (double p : v.pixels) acc += p * p;
  return acc;
}

double fidelity(const ComplexState& a, const ComplexState& b) {
  const double na = norm_squared(a);
  const double nb = norm_squared(b);
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("fidelity: zero-norm input");
  const double overlap = std::norm(inner_product(a, b));
  return std::clamp(overlap / (na * nb), 0.0, 1.0);
}

double projection_probability(const ComplexState& reference, const ComplexState& probe) {
  const double nr = norm_squared(reference);
  if (nr == 0.0)
    throw std::invalid_argument("projection_probability: zero-norm reference");
  return std::norm(inner_product(reference, probe)) / nr;
}

double linear_overlap(const ImageVector& o, const ImageVector& m) {
  if (o.size() != m.size())
    throw std::invalid_argument("linear_overlap: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) acc += o[i] * m[i];
  return acc;
}

ComplexState normalize(const ComplexState& v) {
  const double n = std::sqrt(norm_squared(v));
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  ComplexState out = v;
  for (auto& c : out.amplitudes) c /= n;
  return out;
}

ImageVector normalize(const ImageVector& v) {
  const double n = std::sqrt(norm_squared(v));
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  ImageVector out = v;
  for (auto& p : out.pixels) p /= n;
  return out;
}

}  // namespace selfguided
