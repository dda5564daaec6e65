#include "selfguided/reconstruction.hpp"

#include <stdexcept>

namespace selfguided {

ImageVector ghost_estimate(const std::vector<ImagingMeasurement>& measurements) {
  if (measurements.size() < 2)
    throw std::invalid_argument("ghost_estimate: need at least two measurements");
  const std::size_t n = measurements.front().mask.size();
  const int w = measurements.front().mask.width;
  const int h = measurements.front().mask.height;
  for (const auto& m : measurements)
    if (m.mask.size() != n)
      throw std::invalid_argument("ghost_estimate: mask size mismatch");

  const double count = static_cast<double>(measurements.size());
  double y_mean = 0.0;
  for (const auto& m : measurements) y_mean += m.value;
  y_mean /= count;

  std::vector<double> mask_mean(n, 0.0);
  for (const auto& m : measurements)
    for (std::size_t i = 0; i < n; ++i) mask_mean[i] += m.mask[i];
  for (auto& v : mask_mean) v /= count;

  ImageVector out(w, h);
  for (const auto& m : measurements) {
    const double yc = m.value - y_mean;
    for (std::size_t i = 0; i < n; ++i) out[i] += yc * (m.mask[i] - mask_mean[i]);
  }
  for (auto& p : out.pixels) p /= count;
  return out;
}

ImageVector spi_step(const ImageVector& sigma, double y, const Mask& mask) {
  if (sigma.size() != mask.size())
    throw std::invalid_argument("spi_step: dimension mismatch");
  ImageVector out = sigma;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += y * mask[i];
  return out;
}

ImageVector ogi_step(const ImageVector& sigma, double y, const Mask& mask,
                     bool normalized) {
  if (sigma.size() != mask.size())
    throw std::invalid_argument("ogi_step: dimension mismatch");
  const ImageVector mask_img = mask.as_image();
  double residual = y - linear_overlap(sigma, mask_img);
  if (normalized) {
    const double mask_norm = linear_overlap(mask_img, mask_img);
    if (mask_norm == 0.0) throw std::invalid_argument("ogi_step: zero mask");
    residual /= mask_norm;
  }
  ImageVector out = sigma;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += residual * mask[i];
  return out;
}

RunTrace run_spi(const ImagingOracle& oracle, const std::vector<Mask>& masks,
                 SpiVariant variant, bool ogi_normalized) {
  const ImageVector& object = oracle.object();
  ImageVector sigma(object.width, object.height);

  RunTrace trace;
  trace.variant = variant == SpiVariant::Spi ? "spi" : "ogi";
  TraceRow init;
  init.k = 0;
  init.metric = image_error(object, sigma);
  trace.rows.push_back(init);

  for (std::size_t k = 0; k < masks.size(); ++k) {
    const double y = oracle.mask_overlap(masks[k], k);
    sigma = variant == SpiVariant::Spi ? spi_step(sigma, y, masks[k])
                                       : ogi_step(sigma, y, masks[k], ogi_normalized);
    TraceRow row;
    row.k = k + 1;
    row.metric = image_error(object, sigma);
    row.f_plus = y;  // the single measured overlap
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace selfguided
