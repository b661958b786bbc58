#include "wmarena/image.hpp"

#include <algorithm>
#include <cmath>

#include "wmarena/error.hpp"

namespace wmarena {

ImagePlane::ImagePlane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("negative plane dimensions");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

ImagePlane::ImagePlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0 || data_.size() != static_cast<std::size_t>(width) * height)
    throw ValidationError("plane data size does not match dimensions");
}

bool ImagePlane::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

RgbImage::RgbImage(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("negative image dimensions");
  samples_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

RgbImage::RgbImage(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width < 0 || height < 0 ||
      samples_.size() != static_cast<std::size_t>(width) * height * kChannels)
    throw ValidationError("image sample count does not match dimensions");
}

RgbImage RgbImage::clamped() const {
  RgbImage out = *this;
  for (double& v : out.samples_) v = std::clamp(v, 0.0, 1.0);
  return out;
}

RgbImage pad_to_multiple_of_8(const RgbImage& img) {
  const int w = (img.width() + 7) / 8 * 8;
  const int h = (img.height() + 7) / 8 * 8;
  if (w == img.width() && h == img.height()) return img;
  if (img.empty()) throw ValidationError("cannot pad an empty image");
  RgbImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = std::min(y, img.height() - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = std::min(x, img.width() - 1);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(sx, sy, c);
    }
  }
  return out;
}

namespace {
void require_same_shape(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw ValidationError("image dimensions differ");
}
}  // namespace

double max_abs_difference(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a, b);
  double m = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) m = std::max(m, std::abs(sa[i] - sb[i]));
  return m;
}

double mean_abs_difference(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a, b);
  auto sa = a.samples();
  auto sb = b.samples();
  if (sa.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) s += std::abs(sa[i] - sb[i]);
  return s / static_cast<double>(sa.size());
}

}  // namespace wmarena
