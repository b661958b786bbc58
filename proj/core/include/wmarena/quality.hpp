#pragma once

#include <array>
#include <string>
#include <vector>

#include "wmarena/image.hpp"

namespace wmarena {

inline constexpr double kPsnrCap = 100.0;
inline constexpr int kQualityMetricCount = 6;

struct QualityVector {
  double mse = 0.0;
  double psnr = kPsnrCap;
  double ssim = 1.0;
  double mean_delta_e = 0.0;
  double highfreq_artifact = 0.0;
  double banding = 0.0;

  /// Metric values in the fixed order of quality_metric_names().
  std::array<double, kQualityMetricCount> values() const;
};

/// "mse", "psnr", "ssim", "mean_delta_e", "highfreq_artifact", "banding".
const std::array<std::string, kQualityMetricCount>& quality_metric_names();

/// +1 when larger raw values mean more degradation, -1 otherwise (PSNR, SSIM).
const std::array<int, kQualityMetricCount>& quality_metric_orientation();

/// MSE over all samples; PSNR = 10 log10(1/MSE) capped at 100 dB; SSIM on
/// luminance with an 11x11 Gaussian window (sigma 1.5, K1 0.01, K2 0.03) over
/// the valid region; mean CIE76 delta E after sRGB -> Lab (D65);
/// highfreq_artifact = energy of the luminance difference above normalized
/// radius 0.35 divided by the reference's energy there; banding = increase in
/// the fraction of empty bins inside the occupied range of a 256-bin
/// luminance histogram (clamped at 0).
QualityVector quality_vector(const RgbImage& reference, const RgbImage& candidate);

double psnr(const RgbImage& reference, const RgbImage& candidate);
double ssim_luminance(const RgbImage& reference, const RgbImage& candidate);

struct NqdAnchor {
  double p10 = 0.0;
  double p90 = 0.0;
};

/// Per-metric anchors of oriented values (higher = more degraded).
struct NqdModel {
  std::array<std::string, kQualityMetricCount> metrics = quality_metric_names();
  std::array<int, kQualityMetricCount> orientation = quality_metric_orientation();
  std::array<NqdAnchor, kQualityMetricCount> anchors{};
  std::size_t fitted_on = 0;
};

/// Requires at least 20 vectors. Quantiles are linear-interpolated (type 7).
NqdModel fit_nqd(const std::vector<QualityVector>& vectors);

/// Mean over metrics of clamp(0.1 + 0.8 (x - p10) / (p90 - p10), 0, 1) on
/// oriented values; a metric with p10 == p90 contributes 0.5.
double nqd_score(const QualityVector& v, const NqdModel& model);

/// Per-metric normalized contribution (same rule as nqd_score).
std::array<double, kQualityMetricCount> nqd_components(const QualityVector& v, const NqdModel& model);

}  // namespace wmarena
