#pragma once

#include <cstdint>
#include <utility>

#include "selfguided/core.hpp"
#include "selfguided/generators.hpp"
#include "selfguided/measurement.hpp"
#include "selfguided/metrics.hpp"

namespace selfguided {

// Step-size rule for the SPSA iterations: either constant (alpha, beta)
// or the usual power-law decay alpha_k = a/(k+1+A)^s, beta_k = b/(k+1)^t.
struct Schedule {
  enum class Kind { Constant, PowerLaw };
  Kind kind = Kind::Constant;

  double alpha = 0.05;
  double beta = 0.2;

  double a = 1.0, big_a = 0.0, s = 0.602;
  double b = 0.1, t = 0.101;

  static Schedule constant(double alpha, double beta);
  static Schedule power_law(double a, double big_a, double s, double b, double t);

  double alpha_at(std::uint64_t k) const;
  double beta_at(std::uint64_t k) const;
};

enum class TomographyVariant { Sgqt, Osgqt, Sgi };

struct TomographyConfig {
  std::size_t dim = 5;
  std::uint64_t iterations = 350;
  TomographyVariant variant = TomographyVariant::Sgqt;
  Schedule schedule;
  std::uint64_t seed = 0;
  StateMode state_mode = StateMode::PhaseOnly;
};

// SPSA two-point gradient estimate (f+ - f-) / (2 beta_k).
double spsa_gradient(double f_plus, double f_minus, double beta_k);

// sigma_k +- beta_k Delta_k, unnormalized (fidelity normalizes internally).
std::pair<ComplexState, ComplexState> probe_states(const ComplexState& sigma,
                                                   const PerturbationDirection& delta,
                                                   double beta_k);

// One SGQT iteration: normalize(sigma + alpha_k g_k Delta_k) with g_k from
// the oracle's two fidelity measurements.
ComplexState sgqt_step(const ComplexState& sigma, const PerturbationDirection& delta,
                       double alpha_k, double beta_k, QuantumOracle& oracle,
                       std::uint64_t iteration, TraceRow* row = nullptr);

// One orthogonalised SGQT iteration.  The measured difference is reduced
// by the estimate's own numerically-computed response to the probes,
//   f(sigma_k, sigma+) - f(sigma_k, sigma-),
// so the truth is an exact fixed point.  Still exactly two oracle calls.
ComplexState osgqt_step(const ComplexState& sigma, const PerturbationDirection& delta,
                        double alpha_k, double beta_k, QuantumOracle& oracle,
                        std::uint64_t iteration, TraceRow* row = nullptr);

// One self-guided-imaging iteration: sigma + alpha_k g_k Delta_k with the
// linear overlap oracle.  No normalization anywhere in the imaging path.
ImageVector sgi_step(const ImageVector& sigma, const Mask& delta, double alpha_k,
                     double beta_k, const ImagingOracle& oracle,
                     std::uint64_t iteration, TraceRow* row = nullptr);

// Full quantum run: random seeded initial estimate, K steps of the
// selected variant, per-iteration infidelity plus step diagnostics.
RunTrace run_tomography(const TomographyConfig& config, QuantumOracle& oracle);

// As above but from a provided starting estimate.
RunTrace run_tomography_from(const TomographyConfig& config, QuantumOracle& oracle,
                             const ComplexState& initial);

// Imaging run of the SGI variant: zero initial image, random-sign
// perturbation masks drawn from the run's RNG stream.
RunTrace run_sgi(const TomographyConfig& config, const ImagingOracle& oracle,
                 const std::vector<Mask>& masks);

}  // namespace selfguided
