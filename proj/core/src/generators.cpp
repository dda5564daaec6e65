#include "selfguided/generators.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace selfguided {

namespace {

void check_pixels(int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("mask/image dimensions must be positive");
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Mask random_sign_mask(int width, int height, CounterRng& rng) {
  check_pixels(width, height);
  Mask m;
  m.kind = MaskKind::Random;
  m.width = width;
  m.height = height;
  m.entries.resize(static_cast<std::size_t>(width) * height);
  for (auto& e : m.entries) e = (rng.next_u64() & 1) ? 1.0 : -1.0;
  return m;
}

Mask hadamard_mask(int order, int row, int width, int height) {
  if (order < 1 || !std::has_single_bit(static_cast<unsigned>(order)))
    throw std::invalid_argument("hadamard_mask: order must be a power of two");
  if (row < 0 || row >= order)
    throw std::invalid_argument("hadamard_mask: row out of range");
  check_pixels(width, height);
  if (width * height != order)
    throw std::invalid_argument("hadamard_mask: width*height must equal order");
  Mask m;
  m.kind = MaskKind::Hadamard;
  m.width = width;
  m.height = height;
  m.entries.resize(static_cast<std::size_t>(order));
  for (int j = 0; j < order; ++j) {
    int bits = std::popcount(static_cast<unsigned>(row & j));
    m.entries[static_cast<std::size_t>(j)] = (bits & 1) ? -1.0 : 1.0;
  }
  return m;
}

PerturbationDirection random_perturbation(std::size_t dim, CounterRng& rng) {
  if (dim == 0) throw std::invalid_argument("random_perturbation: dim must be >= 1");
  static const Complex alphabet[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  PerturbationDirection d;
  d.entries.resize(dim);
  for (auto& e : d.entries) e = alphabet[rng.uniform_below(4)];
  return d;
}

PerturbationDirection random_sign_perturbation(std::size_t dim, CounterRng& rng) {
  if (dim == 0) throw std::invalid_argument("random_sign_perturbation: dim must be >= 1");
  PerturbationDirection d;
  d.entries.resize(dim);
  for (auto& e : d.entries) e = (rng.next_u64() & 1) ? Complex(1, 0) : Complex(-1, 0);
  return d;
}

ComplexState random_oam_state(std::size_t dim, CounterRng& rng, StateMode mode) {
  if (dim == 0) throw std::invalid_argument("random_oam_state: dim must be >= 1");
  ComplexState s(dim);
  if (mode == StateMode::PhaseOnly) {
    const double mag = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& c : s.amplitudes) {
      double theta = kTwoPi * rng.uniform();
      c = Complex(mag * std::cos(theta), mag * std::sin(theta));
    }
    return s;
  }
  for (auto& c : s.amplitudes) c = Complex(rng.gaussian(), rng.gaussian());
  return normalize(s);
}

ImageVector test_image(const std::string& preset, int width, int height) {
  check_pixels(width, height);
  ImageVector img(width, height);
  if (preset == "checker") {
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        img[static_cast<std::size_t>(y) * width + x] = ((x + y) & 1) ? 0.0 : 1.0;
  } else if (preset == "disk") {
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double r = 0.35 * std::min(width, height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        double dx = x - cx, dy = y - cy;
        img[static_cast<std::size_t>(y) * width + x] =
            (dx * dx + dy * dy <= r * r) ? 1.0 : 0.0;
      }
  } else if (preset == "gradient") {
    // monotone along rows; offset keeps every pixel > 0
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        img[static_cast<std::size_t>(y) * width + x] = 1.0 + x;
  } else {
    throw std::invalid_argument("test_image: unknown preset '" + preset + "'");
  }
  return normalize(img);
}

namespace {

// Reads the next token of a PGM header, skipping whitespace and comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw std::runtime_error("pgm: truncated header");
  return tok;
}

}  // namespace

ImageVector load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open '" + path + "'");
  std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5")
    throw std::runtime_error("pgm: unsupported magic '" + magic + "'");
  int width = std::stoi(pgm_token(in));
  int height = std::stoi(pgm_token(in));
  int maxval = std::stoi(pgm_token(in));
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw std::runtime_error("pgm: invalid header");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  ImageVector img(width, height);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) img[i] = std::stod(pgm_token(in));
  } else {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
      throw std::runtime_error("pgm: truncated pixel data");
    for (std::size_t i = 0; i < n; ++i) {
      img[i] = bytes == 2 ? raw[2 * i] * 256.0 + raw[2 * i + 1] : raw[i];
    }
  }
  for (double p : img.pixels)
    if (p < 0.0) throw std::runtime_error("pgm: negative pixel value");
  return normalize(img);
}

void save_pgm(const ImageVector& image, const std::string& path) {
  double lo = image.pixels.empty() ? 0.0 : image[0];
  double hi = lo;
  for (double p : image.pixels) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot write '" + path + "'");
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  for (double p : image.pixels) {
    int v = static_cast<int>(std::lround(255.0 * (p - lo) / span));
    out.put(static_cast<char>(v));
  }
  if (!out) throw std::runtime_error("pgm: write failure");
}

}  // namespace selfguided
