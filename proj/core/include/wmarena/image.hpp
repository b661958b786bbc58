#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wmarena {

/// Single-channel real-valued 2D array (luminance, latent, or transform data).
/// Row-major, `at(x, y)` addresses column x of row y.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int width, int height, double fill = 0.0);
  ImagePlane(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// True when every sample is finite.
  bool all_finite() const;

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Three-channel image with samples in [0,1], interleaved RGB, row-major.
/// Samples are kept as reals; 8-bit quantization happens only at file I/O.
class RgbImage {
 public:
  static constexpr int kChannels = 3;

  RgbImage() = default;
  RgbImage(int width, int height, double fill = 0.0);
  RgbImage(int width, int height, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return kChannels; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return samples_.empty(); }

  double at(int x, int y, int c) const {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  double& at(int x, int y, int c) {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }

  /// Copy with every sample clamped to [0,1].
  RgbImage clamped() const;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

/// Pads right/bottom edges by replication so both dimensions are multiples of 8.
RgbImage pad_to_multiple_of_8(const RgbImage& img);

/// Largest absolute per-sample difference; images must share dimensions.
double max_abs_difference(const RgbImage& a, const RgbImage& b);
double mean_abs_difference(const RgbImage& a, const RgbImage& b);

}  // namespace wmarena
