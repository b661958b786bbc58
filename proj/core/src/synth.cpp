#include "wmarena/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wmarena/error.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena {

namespace {

// Gaussian white noise shaped to 1/f amplitude between one reference-grid
// step and `cutoff`, scaled to the requested expected standard deviation.
ImagePlane pink_field(KeyedStream& rng, int w, int h, double cutoff, double contrast) {
  ImagePlane noise(w, h);
  for (double& v : noise.data()) v = rng.gaussian();
  Spectrum2D s = fft2(noise);
  constexpr double kStep = 1.0 / 256.0;
  double filter_power = 0.0;
  for (int v = -h / 2; v < h / 2; ++v)
    for (int u = -w / 2; u < w / 2; ++u) {
      const double r = normalized_radius(u, v, w, h);
      const double g = (r >= kStep * 0.999 && r <= cutoff) ? kStep / std::max(r, kStep) : 0.0;
      s.at(u, v) *= g;
      filter_power += g * g;
    }
  ImagePlane field = ifft2(s);
  const double scale = contrast / std::sqrt(filter_power / (static_cast<double>(w) * h));
  for (double& v : field.data()) v *= scale;
  return field;
}

}  // namespace

RgbImage synth_image(std::uint64_t seed, int width, int height, const SynthParams& p) {
  if (width < 64 || height < 64 || width % 8 || height % 8)
    throw ValidationError("synthetic images need dimensions that are multiples of 8 and >= 64");
  const WatermarkKey key{Seed256{sha256("wmarena/synth" + std::to_string(seed))}, "synth"};
  KeyedStream rng(key, 0);

  double base[3];
  for (double& b : base) b = p.base_low + (p.base_high - p.base_low) * rng.uniform();

  // Random direction with zero luminance: remove the component along the
  // luminance weights, then normalise.
  const double wl[3] = {kLumaR, kLumaG, kLumaB};
  double dir[3] = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
  const double proj = (dir[0] * wl[0] + dir[1] * wl[1] + dir[2] * wl[2]) /
                      (wl[0] * wl[0] + wl[1] * wl[1] + wl[2] * wl[2]);
  double norm = 0.0;
  for (int c = 0; c < 3; ++c) {
    dir[c] -= proj * wl[c];
    norm += dir[c] * dir[c];
  }
  norm = std::sqrt(norm);
  for (double& d : dir) d /= norm;

  const ImagePlane lum = pink_field(rng, width, height, p.cutoff, p.luminance_contrast);
  const ImagePlane chroma = pink_field(rng, width, height, p.cutoff, p.chroma_contrast);

  RgbImage img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double l = lum.at(x, y) + p.texture_sigma * rng.gaussian();
      const double ch = chroma.at(x, y);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = std::clamp(base[c] + l + ch * dir[c], 0.0, 1.0);
    }
  return img;
}

}  // namespace wmarena
