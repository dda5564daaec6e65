#pragma once

#include <string>
#include <vector>

#include "selfguided/core.hpp"
#include "selfguided/rng.hpp"

namespace selfguided {

// SPSA perturbation direction: entries drawn from {1,-1,i,-i} (quantum)
// or {+1,-1} (imaging).  |entry| = 1 always.
struct PerturbationDirection {
  std::vector<Complex> entries;
  std::size_t dim() const { return entries.size(); }
  const Complex& operator[](std::size_t i) const { return entries[i]; }
};

enum class MaskKind { Random, Hadamard };

// A +-1 measurement mask, reshaped to width x height when used as image.
struct Mask {
  std::vector<double> entries;  // each exactly +1 or -1
  MaskKind kind = MaskKind::Random;
  int width = 0;
  int height = 0;

  std::size_t size() const { return entries.size(); }
  double operator[](std::size_t i) const { return entries[i]; }

  ImageVector as_image() const { return ImageVector(entries, width, height); }
};

// Each entry +-1 with probability 1/2.
Mask random_sign_mask(int width, int height, CounterRng& rng);

// Row `row` of the Sylvester Hadamard matrix of the given order
// (order must be a power of two).  entry j = (-1)^popcount(row & j).
Mask hadamard_mask(int order, int row, int width, int height);

// Entries uniform over {1,-1,i,-i}.
PerturbationDirection random_perturbation(std::size_t dim, CounterRng& rng);

// Entries uniform over {+1,-1}, for the imaging variants.
PerturbationDirection random_sign_perturbation(std::size_t dim, CounterRng& rng);

enum class StateMode { PhaseOnly, Haar };

// PhaseOnly: c_l = e^{i theta_l}/sqrt(d), theta uniform; Haar: complex
// Gaussian amplitudes, normalized.  Unit norm either way.
ComplexState random_oam_state(std::size_t dim, CounterRng& rng,
                              StateMode mode = StateMode::PhaseOnly);

// Procedural nonnegative test images, normalized to <O|O> = 1.
// Presets: "checker", "disk", "gradient".
ImageVector test_image(const std::string& preset, int width, int height);

// Plain/binary PGM (P2/P5), 8- or 16-bit; result normalized to unit norm.
ImageVector load_pgm(const std::string& path);
void save_pgm(const ImageVector& image, const std::string& path);

}  // namespace selfguided
