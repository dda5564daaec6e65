#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "selfguided/core.hpp"
#include "selfguided/generators.hpp"
#include "selfguided/rng.hpp"

namespace selfguided {

enum class NoiseKind { None, Gaussian, Poisson };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double gamma = 0.0;             // std dev of additive overlap noise
  double rate = 0.0;              // expected coincidence rate at sigma = psi (counts/s)
  double integration_time = 0.0;  // seconds

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double gamma);
  static NoiseModel poisson(double rate, double integration_time);
};

struct CountPair {
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
};

// y + n_k with n_k ~ Normal(0, gamma^2); gamma = 0 is the identity.
double gaussian_overlap_noise(double y, double gamma, CounterRng& rng);

// Poisson count with mean F * rate * integration_time.  F is clamped to
// [0,1] to absorb rounding from fidelity().
std::uint64_t poisson_counts(double f, double rate, double integration_time,
                             CounterRng& rng);

// f_pm ~ 2 N_pm / (N+ + N-).  f+ + f- = 2 exactly.  Throws when both
// counts are zero (caller must skip the iteration).
struct FidelityPair {
  double f_plus;
  double f_minus;
};
FidelityPair fidelity_from_counts(const CountPair& counts);

// Result of one oracle probe pair.  `skipped` is set when a Poisson
// oracle records zero total counts; the step must then leave sigma
// unchanged.
struct ProbeResult {
  double f_plus = 0.0;
  double f_minus = 0.0;
  std::optional<CountPair> counts;
  bool skipped = false;
};

// Measurement oracle for the quantum pipeline.  A probe evaluates the
// detection-rate overlap |<psi|sigma_pm>|^2 of the (normalized) true
// state with the raw probe kets, matching an amplitude hologram whose
// coincidence rate scales with the encoded probe amplitude.  Poisson
// noise converts the two rates to counts and applies the relative
// estimator f_pm = 2 N_pm / (N+ + N-).
class QuantumOracle {
 public:
  explicit QuantumOracle(ComplexState truth, NoiseModel noise, std::uint64_t seed);

  // Two fidelity evaluations, one per probe.  `iteration` indexes the
  // shared Gaussian noise stream.
  ProbeResult probe(const ComplexState& sigma_plus, const ComplexState& sigma_minus,
                    std::uint64_t iteration);

  // Single noiseless evaluation (used for metrics, never by a step).
  double exact(const ComplexState& probe) const;

  const ComplexState& truth() const { return truth_; }

 private:
  ComplexState truth_;
  NoiseModel noise_;
  std::uint64_t noise_seed_;
  CounterRng count_rng_;
};

// Measurement oracle for the imaging pipeline: linear overlaps with the
// true object.  The Gaussian stream is indexed by iteration so SPI and
// SGI runs on the same seed consume identical noise samples n_k, entering
// as <O|Delta_k> -> <O|Delta_k> + n_k in both.
class ImagingOracle {
 public:
  explicit ImagingOracle(ImageVector object, NoiseModel noise, std::uint64_t seed);

  // SPI/ghost measurement: <O|Delta> + n_k.
  double mask_overlap(const Mask& mask, std::uint64_t iteration) const;

  // SGI probe pair: f_pm = <O|sigma +- beta Delta> +- beta n_k.
  ProbeResult probe(const ImageVector& sigma, const Mask& mask, double beta,
                    std::uint64_t iteration) const;

  double exact(const ImageVector& probe) const;

  const ImageVector& object() const { return object_; }

 private:
  double noise_at(std::uint64_t iteration) const;

  ImageVector object_;
  NoiseModel noise_;
  std::uint64_t noise_seed_;
};

}  // namespace selfguided
