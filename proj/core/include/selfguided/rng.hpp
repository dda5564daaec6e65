#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace selfguided {

// Counter-based 64-bit generator ("splitmix64-counter", stream version 1).
//
// Output i of stream s is  mix64(s + (i+1) * 0x9E3779B97F4A7C15)  where
// mix64 is the splitmix64 finalizer.  Every draw is a pure function of
// (seed, counter), so streams can be replayed or indexed at random from
// any language with 64-bit integers.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Seed derivation for run r of a multi-run experiment.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run) {
  return mix64(base_seed ^ counter_draw(0x5E1F67D1DEDULL, run));
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() { return counter_draw(seed_, counter_++); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, 1); never returns exactly 0 (safe to pass to log).
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t uniform_below(std::uint64_t n) {
    // Modulo bias is < 2^-60 for the small alphabets used here.
    return next_u64() % n;
  }

  // Standard normal via Box-Muller; consumes exactly two draws.
  double gaussian() {
    double u1 = uniform_open();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Poisson(mean); Knuth multiplication for small means, Hormann's PTRD
  // transformed rejection for large ones.
  std::uint64_t poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean))
      throw std::invalid_argument("poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_knuth(mean);
    return poisson_ptrd(mean);
  }

 private:
  std::uint64_t poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double product = uniform_open();
    while (product > limit) {
      ++k;
      product *= uniform_open();
    }
    return k;
  }

  std::uint64_t poisson_ptrd(double mean) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mean);
    for (;;) {
      double u = uniform() - 0.5;
      double v = uniform_open();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      double k = kf;
      double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      double rhs = -mean + k * log_mu - std::lgamma(k + 1.0);
      if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// One standard-normal value addressable by index, so two pipelines can
// consume the identical noise sample n_k at iteration k.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) {
  double u1 = (static_cast<double>(counter_draw(seed, 2 * index) >> 11) + 0.5) * 0x1.0p-53;
  double u2 = static_cast<double>(counter_draw(seed, 2 * index + 1) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace selfguided
