#include "selfguided/tomography.hpp"

#include <cmath>
#include <stdexcept>

namespace selfguided {

Schedule Schedule::constant(double alpha, double beta) {
  if (alpha <= 0.0 || beta <= 0.0)
    throw std::invalid_argument("schedule: alpha and beta must be > 0");
  Schedule s;
  s.kind = Kind::Constant;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

Schedule Schedule::power_law(double a, double big_a, double s, double b, double t) {
  if (a <= 0.0 || b <= 0.0 || s <= 0.0 || t <= 0.0 || big_a < 0.0)
    throw std::invalid_argument("schedule: power-law constants must be positive");
  Schedule sch;
  sch.kind = Kind::PowerLaw;
  sch.a = a;
  sch.big_a = big_a;
  sch.s = s;
  sch.b = b;
  sch.t = t;
  return sch;
}

double Schedule::alpha_at(std::uint64_t k) const {
  if (kind == Kind::Constant) return alpha;
  return a / std::pow(static_cast<double>(k) + 1.0 + big_a, s);
}

double Schedule::beta_at(std::uint64_t k) const {
  if (kind == Kind::Constant) return beta;
  return b / std::pow(static_cast<double>(k) + 1.0, t);
}

double spsa_gradient(double f_plus, double f_minus, double beta_k) {
  if (beta_k <= 0.0) throw std::invalid_argument("spsa_gradient: beta_k must be > 0");
  return (f_plus - f_minus) / (2.0 * beta_k);
}

std::pair<ComplexState, ComplexState> probe_states(const ComplexState& sigma,
                                                   const PerturbationDirection& delta,
                                                   double beta_k) {
  if (sigma.dim() != delta.dim())
    throw std::invalid_argument("probe_states: dimension mismatch");
  if (beta_k <= 0.0) throw std::invalid_argument("probe_states: beta_k must be > 0");
  ComplexState plus = sigma, minus = sigma;
  for (std::size_t i = 0; i < sigma.dim(); ++i) {
    plus[i] += beta_k * delta[i];
    minus[i] -= beta_k * delta[i];
  }
  return {std::move(plus), std::move(minus)};
}

namespace {

void fill_row(TraceRow* row, const ProbeResult& probe, double g,
              double alpha_k, double beta_k) {
  if (!row) return;
  row->f_plus = probe.f_plus;
  row->f_minus = probe.f_minus;
  row->g_k = g;
  row->alpha_k = alpha_k;
  row->beta_k = beta_k;
  if (probe.counts) {
    row->n_plus = probe.counts->n_plus;
    row->n_minus = probe.counts->n_minus;
  }
}

ComplexState apply_update(const ComplexState& sigma, const PerturbationDirection& delta,
                          double step) {
  ComplexState next = sigma;
  for (std::size_t i = 0; i < sigma.dim(); ++i) next[i] += step * delta[i];
  return normalize(next);
}

// Probes are displaced along the unit-normalized direction Delta/sqrt(d);
// the alphabet entries all have magnitude 1, so the displacement has norm
// beta_k regardless of dimension.
double direction_scale(const PerturbationDirection& delta) {
  return 1.0 / std::sqrt(static_cast<double>(delta.dim()));
}

}  // namespace

ComplexState sgqt_step(const ComplexState& sigma, const PerturbationDirection& delta,
                       double alpha_k, double beta_k, QuantumOracle& oracle,
                       std::uint64_t iteration, TraceRow* row) {
  const double scale = direction_scale(delta);
  auto [plus, minus] = probe_states(sigma, delta, beta_k * scale);
  const ProbeResult probe = oracle.probe(plus, minus, iteration);
  if (probe.skipped) {
    fill_row(row, probe, 0.0, alpha_k, beta_k);
    return sigma;
  }
  const double g = spsa_gradient(probe.f_plus, probe.f_minus, beta_k);
  fill_row(row, probe, g, alpha_k, beta_k);
  return apply_update(sigma, delta, alpha_k * g * scale);
}

ComplexState osgqt_step(const ComplexState& sigma, const PerturbationDirection& delta,
                        double alpha_k, double beta_k, QuantumOracle& oracle,
                        std::uint64_t iteration, TraceRow* row) {
  const double scale = direction_scale(delta);
  auto [plus, minus] = probe_states(sigma, delta, beta_k * scale);
  const ProbeResult probe = oracle.probe(plus, minus, iteration);
  if (probe.skipped) {
    fill_row(row, probe, 0.0, alpha_k, beta_k);
    return sigma;
  }
  // Computed numerically on the current guess, never measured; uses the
  // same detection-rate overlap as the oracle so the two differences
  // cancel exactly at sigma = psi.
  const double correction = projection_probability(sigma, plus) -
                            projection_probability(sigma, minus);
  const double measured = probe.f_plus - probe.f_minus;
  const double g = (measured - correction) / (2.0 * beta_k);
  fill_row(row, probe, g, alpha_k, beta_k);
  return apply_update(sigma, delta, alpha_k * g * scale);
}

ImageVector sgi_step(const ImageVector& sigma, const Mask& delta, double alpha_k,
                     double beta_k, const ImagingOracle& oracle,
                     std::uint64_t iteration, TraceRow* row) {
  const ProbeResult probe = oracle.probe(sigma, delta, beta_k, iteration);
  const double g = spsa_gradient(probe.f_plus, probe.f_minus, beta_k);
  fill_row(row, probe, g, alpha_k, beta_k);
  ImageVector next = sigma;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += alpha_k * g * delta[i];
  return next;
}

RunTrace run_tomography(const TomographyConfig& config, QuantumOracle& oracle) {
  CounterRng init_rng(mix64(config.seed ^ 0x1417ULL));
  const ComplexState initial =
      random_oam_state(config.dim, init_rng, config.state_mode);
  return run_tomography_from(config, oracle, initial);
}

RunTrace run_tomography_from(const TomographyConfig& config, QuantumOracle& oracle,
                             const ComplexState& initial) {
  if (config.dim < 2)
    throw std::invalid_argument("run_tomography: quantum variants need dim >= 2");
  if (config.variant == TomographyVariant::Sgi)
    throw std::invalid_argument("run_tomography: use run_sgi for the imaging variant");
  if (initial.dim() != config.dim || oracle.truth().dim() != config.dim)
    throw std::invalid_argument("run_tomography: dimension mismatch");

  CounterRng delta_rng(mix64(config.seed ^ 0xde17aULL));
  ComplexState sigma = normalize(initial);

  RunTrace trace;
  trace.seed = config.seed;
  trace.variant = config.variant == TomographyVariant::Sgqt ? "sgqt" : "osgqt";
  TraceRow init_row;
  init_row.k = 0;
  init_row.metric = infidelity(oracle.truth(), sigma);
  trace.rows.push_back(init_row);

  for (std::uint64_t k = 0; k < config.iterations; ++k) {
    const PerturbationDirection delta = random_perturbation(config.dim, delta_rng);
    const double alpha_k = config.schedule.alpha_at(k);
    const double beta_k = config.schedule.beta_at(k);
    TraceRow row;
    row.k = k + 1;
    if (config.variant == TomographyVariant::Sgqt)
      sigma = sgqt_step(sigma, delta, alpha_k, beta_k, oracle, k, &row);
    else
      sigma = osgqt_step(sigma, delta, alpha_k, beta_k, oracle, k, &row);
    if (row.n_plus && row.n_minus && *row.n_plus + *row.n_minus == 0)
      ++trace.skipped_steps;
    row.metric = infidelity(oracle.truth(), sigma);
    trace.rows.push_back(row);
  }
  return trace;
}

RunTrace run_sgi(const TomographyConfig& config, const ImagingOracle& oracle,
                 const std::vector<Mask>& masks) {
  const ImageVector& object = oracle.object();
  ImageVector sigma(object.width, object.height);

  RunTrace trace;
  trace.seed = config.seed;
  trace.variant = "sgi";
  TraceRow init_row;
  init_row.k = 0;
  init_row.metric = image_error(object, sigma);
  trace.rows.push_back(init_row);

  for (std::size_t k = 0; k < masks.size(); ++k) {
    const double alpha_k = config.schedule.alpha_at(k);
    const double beta_k = config.schedule.beta_at(k);
    TraceRow row;
    row.k = k + 1;
    sigma = sgi_step(sigma, masks[k], alpha_k, beta_k, oracle, k, &row);
    row.metric = image_error(object, sigma);
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace selfguided
