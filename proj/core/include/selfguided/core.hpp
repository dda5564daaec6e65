#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace selfguided {

using Complex = std::complex<double>;

// A d-dimensional complex amplitude vector (a pure state or a running
// estimate of one).  Basis labels are OAM indices l = -(d-1)/2 .. (d-1)/2
// for odd d; they are metadata only and never enter the arithmetic.
struct ComplexState {
  std::vector<Complex> amplitudes;

  ComplexState() = default;
  explicit ComplexState(std::vector<Complex> amps) : amplitudes(std::move(amps)) {}
  explicit ComplexState(std::size_t dim) : amplitudes(dim) {}

  std::size_t dim() const { return amplitudes.size(); }
  Complex& operator[](std::size_t i) { return amplitudes[i]; }
  const Complex& operator[](std::size_t i) const { return amplitudes[i]; }

  // OAM label of component i for odd dimensions; 0-centred.
  int basis_label(std::size_t i) const {
    return static_cast<int>(i) - static_cast<int>(dim() - 1) / 2;
  }
};

// An n-pixel real image, row-major, width*height = n.  True objects are
// nonnegative and unit-norm; estimates are unconstrained.
struct ImageVector {
  std::vector<double> pixels;
  int width = 0;
  int height = 0;

  ImageVector() = default;
  ImageVector(int w, int h) : pixels(static_cast<std::size_t>(w) * h, 0.0), width(w), height(h) {}
  ImageVector(std::vector<double> px, int w, int h)
      : pixels(std::move(px)), width(w), height(h) {}

  std::size_t size() const { return pixels.size(); }
  double& operator[](std::size_t i) { return pixels[i]; }
  const double& operator[](std::size_t i) const { return pixels[i]; }
};

// <a|b> = sum_i conj(a_i) b_i.  Throws on dimension mismatch.
Complex inner_product(const ComplexState& a, const ComplexState& b);

double norm_squared(const ComplexState& v);
double norm_squared(const ImageVector& v);

// |<a|b>|^2 / (<a|a><b|b>): projective-measurement fidelity, well defined
// for unnormalized inputs.  Throws on mismatch or zero norm.
double fidelity(const ComplexState& a, const ComplexState& b);

// |<ref_hat|probe>|^2 with only the reference normalized: the detection
// rate behind an amplitude hologram encoding the raw probe ket.  Can
// exceed 1 for probes with norm > 1.
double projection_probability(const ComplexState& reference, const ComplexState& probe);

// sum_i o_i m_i (real overlap).  Throws on dimension mismatch.
double linear_overlap(const ImageVector& o, const ImageVector& m);

// Unit-Euclidean-norm copy; throws on the zero vector.
ComplexState normalize(const ComplexState& v);
ImageVector normalize(const ImageVector& v);

}  // namespace selfguided
