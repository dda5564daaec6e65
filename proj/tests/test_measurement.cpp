#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "selfguided/core.hpp"
#include "selfguided/generators.hpp"
#include "selfguided/measurement.hpp"
#include "selfguided/rng.hpp"
#include "selfguided/tomography.hpp"

using namespace selfguided;

TEST_CASE("gaussian_overlap_noise statistics and reproducibility") {
  CounterRng rng(1);
  CHECK(gaussian_overlap_noise(0.42, 0.0, rng) == 0.42);

  const double gamma = 0.25;
  const int samples = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double v = gaussian_overlap_noise(0.0, gamma, rng);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double stddev = std::sqrt(sum_sq / samples - mean * mean);
  CHECK(std::abs(mean) < 4.0 * gamma / std::sqrt(static_cast<double>(samples)));
  CHECK(std::abs(stddev / gamma - 1.0) < 0.02);

  CounterRng a(55), b(55);
  for (int i = 0; i < 16; ++i)
    CHECK(gaussian_overlap_noise(1.0, 0.3, a) == gaussian_overlap_noise(1.0, 0.3, b));

  CHECK_THROWS(gaussian_overlap_noise(0.0, -0.1, rng));
}

TEST_CASE("poisson_counts mean and variance at the headline rate") {
  CounterRng rng(9);
  CHECK(poisson_counts(0.0, 5000.0, 1.0, rng) == 0);
  CHECK(poisson_counts(-1e-12, 5000.0, 1.0, rng) == 0);  // clamped

  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = static_cast<double>(poisson_counts(1.0, 5000.0, 1.0, rng));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  CHECK(std::abs(mean - 5000.0) < 4.0 * std::sqrt(5000.0 / draws));
  CHECK(std::abs(var / mean - 1.0) < 0.05);

  CHECK_THROWS(poisson_counts(0.5, 0.0, 1.0, rng));
  CHECK_THROWS(poisson_counts(0.5, 5000.0, 0.0, rng));
}

TEST_CASE("fidelity_from_counts fixed values") {
  const FidelityPair even = fidelity_from_counts({100, 100});
  CHECK(even.f_plus == 1.0);
  CHECK(even.f_minus == 1.0);

  const FidelityPair skew = fidelity_from_counts({150, 50});
  CHECK(skew.f_plus == 1.5);
  CHECK(skew.f_minus == 0.5);

  const FidelityPair extreme = fidelity_from_counts({1, 0});
  CHECK(extreme.f_plus == 2.0);
  CHECK(extreme.f_minus == 0.0);

  CHECK_THROWS(fidelity_from_counts({0, 0}));
}

TEST_CASE("count estimator identities over random pairs") {
  CounterRng rng(123);
  const double beta = 0.2;
  for (int i = 0; i < 100000; ++i) {
    CountPair c{rng.uniform_below(10000), rng.uniform_below(10000)};
    if (c.n_plus + c.n_minus == 0) c.n_plus = 1;
    const FidelityPair f = fidelity_from_counts(c);
    CHECK(f.f_plus + f.f_minus == 2.0);  // exact rational identity
    const double direct =
        (static_cast<double>(c.n_plus) - static_cast<double>(c.n_minus)) /
        (beta * static_cast<double>(c.n_plus + c.n_minus));
    CHECK(std::abs(spsa_gradient(f.f_plus, f.f_minus, beta) - direct) < 1e-12);
  }
}

TEST_CASE("noise model factories validate parameters") {
  CHECK(NoiseModel::none().kind == NoiseKind::None);
  CHECK(NoiseModel::gaussian(0.25).gamma == 0.25);
  CHECK_THROWS(NoiseModel::gaussian(-0.1));
  const NoiseModel p = NoiseModel::poisson(5000.0, 0.1);
  CHECK(p.rate == 5000.0);
  CHECK(p.integration_time == 0.1);
  CHECK_THROWS(NoiseModel::poisson(0.0, 1.0));
  CHECK_THROWS(NoiseModel::poisson(5000.0, 0.0));
}

TEST_CASE("noiseless quantum oracle reports detection-rate overlaps") {
  CounterRng rng(4);
  const ComplexState truth = random_oam_state(5, rng);
  QuantumOracle oracle(truth, NoiseModel::none(), 10);

  const ComplexState plus = random_oam_state(5, rng, StateMode::Haar);
  const ComplexState minus = random_oam_state(5, rng, StateMode::Haar);
  const ProbeResult r = oracle.probe(plus, minus, 0);
  CHECK(r.f_plus == doctest::Approx(projection_probability(truth, plus)).epsilon(1e-14));
  CHECK(r.f_minus == doctest::Approx(projection_probability(truth, minus)).epsilon(1e-14));
  CHECK_FALSE(r.skipped);
  CHECK_FALSE(r.counts.has_value());

  CHECK(oracle.exact(truth) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("quantum oracle normalizes the stored truth") {
  ComplexState truth(std::vector<Complex>{{2, 0}, {0, 0}});
  QuantumOracle oracle(truth, NoiseModel::none(), 0);
  CHECK(norm_squared(oracle.truth()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gaussian quantum oracle is reproducible per iteration") {
  CounterRng rng(21);
  const ComplexState truth = random_oam_state(3, rng);
  const ComplexState probe = random_oam_state(3, rng, StateMode::Haar);
  QuantumOracle a(truth, NoiseModel::gaussian(0.25), 7);
  QuantumOracle b(truth, NoiseModel::gaussian(0.25), 7);
  for (std::uint64_t k : {0ULL, 5ULL, 0ULL}) {
    const ProbeResult ra = a.probe(probe, probe, k);
    const ProbeResult rb = b.probe(probe, probe, k);
    CHECK(ra.f_plus == rb.f_plus);
    CHECK(ra.f_minus == rb.f_minus);
    // iteration-indexed stream: each probe at fixed k sees the same noise
    CHECK(ra.f_plus != ra.f_minus);  // two independent samples per pair
  }
}

TEST_CASE("poisson quantum oracle returns the relative estimator") {
  CounterRng rng(33);
  const ComplexState truth = random_oam_state(5, rng);
  QuantumOracle oracle(truth, NoiseModel::poisson(5000.0, 1.0), 99);
  const ComplexState probe = random_oam_state(5, rng, StateMode::Haar);
  const ProbeResult r = oracle.probe(probe, probe, 0);
  REQUIRE(r.counts.has_value());
  const FidelityPair f = fidelity_from_counts(*r.counts);
  CHECK(r.f_plus == f.f_plus);
  CHECK(r.f_minus == f.f_minus);
  CHECK(r.f_plus + r.f_minus == 2.0);
}

TEST_CASE("poisson quantum oracle skips zero-count iterations") {
  // A truth orthogonal to both probes and a tiny exposure make zero
  // total counts certain.
  ComplexState truth(std::vector<Complex>{{1, 0}, {0, 0}});
  ComplexState probe(std::vector<Complex>{{0, 0}, {1, 0}});
  QuantumOracle oracle(truth, NoiseModel::poisson(5000.0, 1.0), 3);
  const ProbeResult r = oracle.probe(probe, probe, 0);
  CHECK(r.skipped);
  REQUIRE(r.counts.has_value());
  CHECK(r.counts->n_plus == 0);
  CHECK(r.counts->n_minus == 0);
}

TEST_CASE("imaging oracle is linear in the probe") {
  const ImageVector object = test_image("disk", 8, 8);
  ImagingOracle oracle(object, NoiseModel::none(), 0);
  CounterRng rng(17);
  const Mask delta = random_sign_mask(8, 8, rng);

  ImageVector sigma(8, 8);
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = 0.01 * static_cast<double>(i);

  const double beta = 0.3;
  const ProbeResult r = oracle.probe(sigma, delta, beta, 0);
  const double base = linear_overlap(object, sigma);
  const double slope = linear_overlap(object, delta.as_image());
  CHECK(r.f_plus == doctest::Approx(base + beta * slope).epsilon(1e-13));
  CHECK(r.f_minus == doctest::Approx(base - beta * slope).epsilon(1e-13));
  CHECK(oracle.mask_overlap(delta, 0) == doctest::Approx(slope).epsilon(1e-13));
}

TEST_CASE("imaging oracle shares one noise sample per iteration") {
  const ImageVector object = test_image("disk", 8, 8);
  ImagingOracle noisy(object, NoiseModel::gaussian(0.25), 77);
  ImagingOracle clean(object, NoiseModel::none(), 77);
  CounterRng rng(18);
  const Mask delta = random_sign_mask(8, 8, rng);
  ImageVector sigma(8, 8);
  sigma[0] = 1.0;

  for (std::uint64_t k : {0ULL, 1ULL, 42ULL}) {
    const double n_k = noisy.mask_overlap(delta, k) - clean.mask_overlap(delta, k);
    const double beta = 0.7;
    const ProbeResult r = noisy.probe(sigma, delta, beta, k);
    const ProbeResult r0 = clean.probe(sigma, delta, beta, k);
    // the same n_k enters the pair as +-beta n_k
    CHECK(r.f_plus - r0.f_plus == doctest::Approx(beta * n_k).epsilon(1e-12));
    CHECK(r.f_minus - r0.f_minus == doctest::Approx(-beta * n_k).epsilon(1e-12));
  }
}

TEST_CASE("imaging oracle rejects poisson noise") {
  CHECK_THROWS(ImagingOracle(test_image("disk", 4, 4),
                             NoiseModel::poisson(5000.0, 1.0), 0));
}
