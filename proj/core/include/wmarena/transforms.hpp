#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "wmarena/image.hpp"

namespace wmarena {

using Complex = std::complex<double>;

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Y = 0.299R + 0.587G + 0.114B.
ImagePlane luminance(const RgbImage& img);

/// Adds (y - luminance(img)) to all three channels, so chroma differences are
/// unchanged and luminance(result) == y. Not clamped.
RgbImage replace_luminance(const RgbImage& img, const ImagePlane& y);

/// Frequency coordinate in centered layout: u in [-W/2, W/2), v in [-H/2, H/2).
struct FreqIndex {
  int u = 0;
  int v = 0;
  friend bool operator==(const FreqIndex&, const FreqIndex&) = default;
};

/// Complex 2D spectrum, DC in the middle. Storage is row-major over
/// (v + H/2, u + W/2).
class Spectrum2D {
 public:
  Spectrum2D() = default;
  Spectrum2D(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  Complex& at(int u, int v) { return data_[flat(u, v)]; }
  const Complex& at(int u, int v) const { return data_[flat(u, v)]; }
  Complex& at(FreqIndex f) { return at(f.u, f.v); }
  const Complex& at(FreqIndex f) const { return at(f.u, f.v); }

  /// Row-major position of (u, v) in centered layout.
  std::size_t flat(int u, int v) const {
    return static_cast<std::size_t>(v + height_ / 2) * width_ + (u + width_ / 2);
  }

  /// Conjugate partner of (u, v) under real-signal symmetry.
  FreqIndex conjugate(FreqIndex f) const;

  /// Sets (u, v) and its conjugate partner so the inverse stays real.
  void set_hermitian(FreqIndex f, Complex value);

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Complex> data_;
};

/// Unitary forward DFT (1/sqrt(WH)), centered output. Dimensions must be >= 8 and even.
Spectrum2D fft2(const ImagePlane& x);
/// Unitary inverse DFT; returns the real part.
ImagePlane ifft2(const Spectrum2D& s);

/// Normalized radius sqrt((u/W)^2 + (v/H)^2).
double normalized_radius(int u, int v, int width, int height);

/// Coefficients with inner <= r < outer. Conjugate pairs are listed once,
/// represented by the member with the smaller centered flat index;
/// `indices` is sorted by that flat index. Self-conjugate coefficients
/// (DC and Nyquist points) are their own representatives.
struct RingMask {
  int width = 0;
  int height = 0;
  double inner = 0.0;
  double outer = 0.0;
  std::vector<FreqIndex> indices;
};

/// Requires 0 <= inner < outer <= sqrt(0.5) (the largest radius present).
/// An empty result is an error.
RingMask ring_mask(int width, int height, double inner, double outer);

/// True when (u, v) is the representative of its conjugate pair.
bool is_representative(int u, int v, int width, int height);

/// JPEG zig-zag order: zigzag_order()[k] = (row, col) of the k-th coefficient.
const std::array<std::pair<int, int>, 64>& zigzag_order();

/// 8x8 orthonormal DCT-II coefficients of each block, stored in zig-zag order.
struct BlockDct {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<std::array<double, 64>> blocks;  // row-major over (by, bx)

  std::array<double, 64>& block(int bx, int by) { return blocks[static_cast<std::size_t>(by) * blocks_x + bx]; }
  const std::array<double, 64>& block(int bx, int by) const {
    return blocks[static_cast<std::size_t>(by) * blocks_x + bx];
  }
};

BlockDct block_dct(const ImagePlane& x);
ImagePlane block_idct(const BlockDct& d);

/// Orthonormal 2D DCT-II of the whole plane; output indexed at(k_x, k_y).
ImagePlane dct2_global(const ImagePlane& x);
ImagePlane idct2_global(const ImagePlane& c);

/// 8x8 box average; dimensions must be multiples of 8.
ImagePlane downsample8(const ImagePlane& x);

/// Bilinear upsampling by 8 with sample i centred on pixel 8i + 3.5 and edge clamping.
ImagePlane upsample8(const ImagePlane& latent);

/// Returns x + upsample8(d) with d chosen so that
/// downsample8(result) == downsample8(x) + latent_delta exactly (up to rounding).
ImagePlane apply_latent_delta(const ImagePlane& x, const ImagePlane& latent_delta);

}  // namespace wmarena
