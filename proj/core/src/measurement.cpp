#include "selfguided/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace selfguided {

NoiseModel NoiseModel::gaussian(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("gaussian noise: gamma must be >= 0");
  NoiseModel m;
  m.kind = NoiseKind::Gaussian;
  m.gamma = gamma;
  return m;
}

NoiseModel NoiseModel::poisson(double rate, double integration_time) {
  if (rate <= 0.0) throw std::invalid_argument("poisson noise: rate must be > 0");
  if (integration_time <= 0.0)
    throw std::invalid_argument("poisson noise: integration time must be > 0");
  NoiseModel m;
  m.kind = NoiseKind::Poisson;
  m.rate = rate;
  m.integration_time = integration_time;
  return m;
}

double gaussian_overlap_noise(double y, double gamma, CounterRng& rng) {
  if (gamma < 0.0) throw std::invalid_argument("gaussian_overlap_noise: gamma < 0");
  if (gamma == 0.0) return y;
  return y + gamma * rng.gaussian();
}

std::uint64_t poisson_counts(double f, double rate, double integration_time,
                             CounterRng& rng) {
  if (rate <= 0.0 || integration_time <= 0.0)
    throw std::invalid_argument("poisson_counts: rate and integration time must be > 0");
  const double mean = std::clamp(f, 0.0, 1.0) * rate * integration_time;
  return rng.poisson(mean);
}

FidelityPair fidelity_from_counts(const CountPair& counts) {
  const std::uint64_t total = counts.n_plus + counts.n_minus;
  if (total == 0)
    throw std::runtime_error("fidelity_from_counts: no detections; skip or retry the iteration");
  const double denom = static_cast<double>(total);
  return {2.0 * static_cast<double>(counts.n_plus) / denom,
          2.0 * static_cast<double>(counts.n_minus) / denom};
}

QuantumOracle::QuantumOracle(ComplexState truth, NoiseModel noise, std::uint64_t seed)
    : truth_(normalize(truth)),
      noise_(noise),
      noise_seed_(mix64(seed ^ 0x9a41a16c5u)),
      count_rng_(mix64(seed ^ 0xc0117c75u)) {}

double QuantumOracle::exact(const ComplexState& probe) const {
  return fidelity(truth_, probe);
}

ProbeResult QuantumOracle::probe(const ComplexState& sigma_plus,
                                 const ComplexState& sigma_minus,
                                 std::uint64_t iteration) {
  ProbeResult r;
  const double f_plus = projection_probability(truth_, sigma_plus);
  const double f_minus = projection_probability(truth_, sigma_minus);
  switch (noise_.kind) {
    case NoiseKind::None:
      r.f_plus = f_plus;
      r.f_minus = f_minus;
      return r;
    case NoiseKind::Gaussian:
      r.f_plus = f_plus + noise_.gamma * gaussian_at(noise_seed_, 2 * iteration);
      r.f_minus = f_minus + noise_.gamma * gaussian_at(noise_seed_, 2 * iteration + 1);
      return r;
    case NoiseKind::Poisson: {
      CountPair c;
      c.n_plus = poisson_counts(f_plus, noise_.rate, noise_.integration_time, count_rng_);
      c.n_minus = poisson_counts(f_minus, noise_.rate, noise_.integration_time, count_rng_);
      r.counts = c;
      if (c.n_plus + c.n_minus == 0) {
        r.skipped = true;
        return r;
      }
      const FidelityPair f = fidelity_from_counts(c);
      r.f_plus = f.f_plus;
      r.f_minus = f.f_minus;
      return r;
    }
  }
  throw std::logic_error("unreachable noise kind");
}

ImagingOracle::ImagingOracle(ImageVector object, NoiseModel noise, std::uint64_t seed)
    : object_(std::move(object)),
      noise_(noise),
      noise_seed_(mix64(seed ^ 0x9a41a16c5u)) {
  if (noise_.kind == NoiseKind::Poisson)
    throw std::invalid_argument("imaging oracle: Poisson noise not supported");
}

double ImagingOracle::noise_at(std::uint64_t iteration) const {
  if (noise_.kind != NoiseKind::Gaussian || noise_.gamma == 0.0) return 0.0;
  return noise_.gamma * gaussian_at(noise_seed_, iteration);
}

double ImagingOracle::mask_overlap(const Mask& mask, std::uint64_t iteration) const {
  return linear_overlap(object_, mask.as_image()) + noise_at(iteration);
}

ProbeResult ImagingOracle::probe(const ImageVector& sigma, const Mask& mask,
                                 double beta, std::uint64_t iteration) const {
  if (sigma.size() != mask.size())
    throw std::invalid_argument("imaging probe: dimension mismatch");
  if (beta <= 0.0) throw std::invalid_argument("imaging probe: beta must be > 0");
  ImageVector plus = sigma, minus = sigma;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    plus[i] += beta * mask[i];
    minus[i] -= beta * mask[i];
  }
  const double n_k = noise_at(iteration);
  ProbeResult r;
  r.f_plus = linear_overlap(object_, plus) + beta * n_k;
  r.f_minus = linear_overlap(object_, minus) - beta * n_k;
  return r;
}

double ImagingOracle::exact(const ImageVector& probe) const {
  return linear_overlap(object_, probe);
}

}  // namespace selfguided
