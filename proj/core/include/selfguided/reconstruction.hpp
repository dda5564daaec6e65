#pragma once

#include <vector>

#include "selfguided/core.hpp"
#include "selfguided/generators.hpp"
#include "selfguided/measurement.hpp"
#include "selfguided/metrics.hpp"

namespace selfguided {

struct ImagingMeasurement {
  Mask mask;
  double value = 0.0;  // measured overlap, possibly noisy
  std::size_t index = 0;
};

// Covariance ghost-imaging estimate:
//   sigma = (1/N) sum_k (y_k - ybar)(Delta_k - Deltabar).
// Not normalized.  Needs at least two measurements.
ImageVector ghost_estimate(const std::vector<ImagingMeasurement>& measurements);

// One SPI iteration: sigma + y * Delta.  No per-step normalization; the
// final estimate is divided by N only when reporting.
ImageVector spi_step(const ImageVector& sigma, double y, const Mask& mask);

// One orthogonalised (Kaczmarz) iteration.  normalized = true (default):
//   sigma + ((y - <sigma|Delta>) / <Delta|Delta>) Delta
// which annihilates the residual exactly; normalized = false keeps the
// literal un-scaled correction.
ImageVector ogi_step(const ImageVector& sigma, double y, const Mask& mask,
                     bool normalized = true);

enum class SpiVariant { Spi, Ogi };

// Drives a full SPI or OGI reconstruction over a mask sequence against a
// measurement oracle, recording image_error per iteration.
RunTrace run_spi(const ImagingOracle& oracle, const std::vector<Mask>& masks,
                 SpiVariant variant, bool ogi_normalized = true);

}  // namespace selfguided
