#include <benchmark/benchmark.h>

#include "selfguided/generators.hpp"
#include "selfguided/measurement.hpp"
#include "selfguided/reconstruction.hpp"
#include "selfguided/tomography.hpp"

namespace {

using namespace selfguided;

void BM_Fidelity(benchmark::State& state) {
  CounterRng rng(7);
  const auto d = static_cast<std::size_t>(state.range(0));
  const ComplexState a = random_oam_state(d, rng);
  const ComplexState b = random_oam_state(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity(a, b));
}
BENCHMARK(BM_Fidelity)->Arg(5)->Arg(64);

void BM_SgqtStep(benchmark::State& state) {
  CounterRng rng(11);
  const std::size_t d = 5;
  QuantumOracle oracle(random_oam_state(d, rng), NoiseModel::none(), 3);
  ComplexState sigma = random_oam_state(d, rng);
  std::uint64_t k = 0;
  for (auto _ : state) {
    const PerturbationDirection delta = random_perturbation(d, rng);
    sigma = sgqt_step(sigma, delta, 0.05, 0.2, oracle, k++);
  }
}
BENCHMARK(BM_SgqtStep);

void BM_OsgqtStep(benchmark::State& state) {
  CounterRng rng(13);
  const std::size_t d = 5;
  QuantumOracle oracle(random_oam_state(d, rng), NoiseModel::none(), 3);
  ComplexState sigma = random_oam_state(d, rng);
  std::uint64_t k = 0;
  for (auto _ : state) {
    const PerturbationDirection delta = random_perturbation(d, rng);
    sigma = osgqt_step(sigma, delta, 0.05, 0.2, oracle, k++);
  }
}
BENCHMARK(BM_OsgqtStep);

void BM_SpiIteration64x64(benchmark::State& state) {
  CounterRng rng(17);
  const ImageVector object = test_image("disk", 64, 64);
  const ImagingOracle oracle(object, NoiseModel::none(), 5);
  ImageVector sigma(64, 64);
  std::uint64_t k = 0;
  for (auto _ : state) {
    const Mask mask = random_sign_mask(64, 64, rng);
    sigma = spi_step(sigma, oracle.mask_overlap(mask, k++), mask);
  }
}
BENCHMARK(BM_SpiIteration64x64);

void BM_HadamardMask4096(benchmark::State& state) {
  int row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hadamard_mask(4096, row, 64, 64));
    row = (row + 1) % 4096;
  }
}
BENCHMARK(BM_HadamardMask4096);

void BM_Poisson5000(benchmark::State& state) {
  CounterRng rng(19);
  for (auto _ : state) benchmark::DoNotOptimize(rng.poisson(5000.0));
}
BENCHMARK(BM_Poisson5000);

}  // namespace

BENCHMARK_MAIN();
