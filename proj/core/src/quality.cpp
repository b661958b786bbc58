#include "wmarena/quality.hpp"

#include <algorithm>
#include <cmath>

#include "wmarena/error.hpp"
#include "wmarena/stats.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena {

std::array<double, kQualityMetricCount> QualityVector::values() const {
  return {mse, psnr, ssim, mean_delta_e, highfreq_artifact, banding};
}

const std::array<std::string, kQualityMetricCount>& quality_metric_names() {
  static const std::array<std::string, kQualityMetricCount> names = {
      "mse", "psnr", "ssim", "mean_delta_e", "highfreq_artifact", "banding"};
  return names;
}

const std::array<int, kQualityMetricCount>& quality_metric_orientation() {
  static const std::array<int, kQualityMetricCount> o = {1, -1, -1, 1, 1, 1};
  return o;
}

namespace {

void require_same_shape(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height() || a.empty())
    throw ValidationError("quality metrics need two non-empty images of equal size");
}

double mse_of(const RgbImage& a, const RgbImage& b) {
  auto x = a.samples();
  auto y = b.samples();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

std::array<double, 11> gaussian_window() {
  std::array<double, 11> w{};
  double s = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double x = i - 5;
    w[i] = std::exp(-x * x / (2.0 * 1.5 * 1.5));
    s += w[i];
  }
  for (double& v : w) v /= s;
  return w;
}

// Separable 11x11 Gaussian filter, valid region only.
ImagePlane filter_valid(const ImagePlane& x) {
  static const auto w = gaussian_window();
  const int ow = x.width() - 10;
  const int oh = x.height() - 10;
  ImagePlane rows(ow, x.height());
  for (int y = 0; y < x.height(); ++y)
    for (int i = 0; i < ow; ++i) {
      double s = 0.0;
      for (int k = 0; k < 11; ++k) s += w[k] * x.at(i + k, y);
      rows.at(i, y) = s;
    }
  ImagePlane out(ow, oh);
  for (int j = 0; j < oh; ++j)
    for (int i = 0; i < ow; ++i) {
      double s = 0.0;
      for (int k = 0; k < 11; ++k) s += w[k] * rows.at(i, j + k);
      out.at(i, j) = s;
    }
  return out;
}

ImagePlane product(const ImagePlane& a, const ImagePlane& b) {
  ImagePlane out(a.width(), a.height());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

double srgb_to_linear(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double d = 6.0 / 29.0;
  return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

std::array<double, 3> to_lab(double r, double g, double b) {
  const double lr = srgb_to_linear(r);
  const double lg = srgb_to_linear(g);
  const double lb = srgb_to_linear(b);
  const double x = (0.4124564 * lr + 0.3575761 * lg + 0.1804375 * lb) / 0.95047;
  const double y = 0.2126729 * lr + 0.7151522 * lg + 0.0721750 * lb;
  const double z = (0.0193339 * lr + 0.1191920 * lg + 0.9503041 * lb) / 1.08883;
  const double fx = lab_f(x);
  const double fy = lab_f(y);
  const double fz = lab_f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double mean_delta_e(const RgbImage& a, const RgbImage& b) {
  double s = 0.0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) {
      const auto p = to_lab(a.at(x, y, 0), a.at(x, y, 1), a.at(x, y, 2));
      const auto q = to_lab(b.at(x, y, 0), b.at(x, y, 1), b.at(x, y, 2));
      s += std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                     (p[2] - q[2]) * (p[2] - q[2]));
    }
  return s / static_cast<double>(a.pixel_count());
}

double highfreq_energy(const Spectrum2D& s) {
  double e = 0.0;
  for (int v = -s.height() / 2; v < s.height() / 2; ++v)
    for (int u = -s.width() / 2; u < s.width() / 2; ++u)
      if (normalized_radius(u, v, s.width(), s.height()) > 0.35) e += std::norm(s.at(u, v));
  return e;
}

double highfreq_artifact(const ImagePlane& ref, const ImagePlane& cand) {
  ImagePlane diff(ref.width(), ref.height());
  auto d = diff.data();
  auto r = ref.data();
  auto c = cand.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = c[i] - r[i];
  return highfreq_energy(fft2(diff)) / (highfreq_energy(fft2(ref)) + 1e-12);
}

double gap_fraction(const ImagePlane& y) {
  std::array<int, 256> hist{};
  for (double v : y.data()) {
    const int b = std::clamp(static_cast<int>(std::floor(std::clamp(v, 0.0, 1.0) * 256.0)), 0, 255);
    ++hist[b];
  }
  int lo = 0;
  int hi = 255;
  while (lo < 255 && hist[lo] == 0) ++lo;
  while (hi > 0 && hist[hi] == 0) --hi;
  if (hi <= lo) return 0.0;
  int empty = 0;
  for (int b = lo; b <= hi; ++b) empty += hist[b] == 0;
  return static_cast<double>(empty) / (hi - lo + 1);
}

}  // namespace

double psnr(const RgbImage& reference, const RgbImage& candidate) {
  require_same_shape(reference, candidate);
  return psnr_from_mse(mse_of(reference, candidate));
}

double ssim_luminance(const RgbImage& reference, const RgbImage& candidate) {
  require_same_shape(reference, candidate);
  if (reference.width() < 11 || reference.height() < 11) throw ValidationError("SSIM needs images of at least 11x11");
  const ImagePlane x = luminance(reference);
  const ImagePlane y = luminance(candidate);
  const ImagePlane mx = filter_valid(x);
  const ImagePlane my = filter_valid(y);
  const ImagePlane sxx = filter_valid(product(x, x));
  const ImagePlane syy = filter_valid(product(y, y));
  const ImagePlane sxy = filter_valid(product(x, y));
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  double total = 0.0;
  auto a = mx.data();
  auto b = my.data();
  auto vx = sxx.data();
  auto vy = syy.data();
  auto cv = sxy.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double varx = vx[i] - a[i] * a[i];
    const double vary = vy[i] - b[i] * b[i];
    const double cov = cv[i] - a[i] * b[i];
    total += ((2.0 * a[i] * b[i] + c1) * (2.0 * cov + c2)) /
             ((a[i] * a[i] + b[i] * b[i] + c1) * (varx + vary + c2));
  }
  return total / static_cast<double>(a.size());
}

QualityVector quality_vector(const RgbImage& reference, const RgbImage& candidate) {
  require_same_shape(reference, candidate);
  QualityVector q;
  q.mse = mse_of(reference, candidate);
  q.psnr = psnr_from_mse(q.mse);
  if (q.mse == 0.0) return q;  // identical: every metric at its no-degradation extreme
  q.ssim = ssim_luminance(reference, candidate);
  q.mean_delta_e = mean_delta_e(reference, candidate);
  const ImagePlane yr = luminance(reference);
  const ImagePlane yc = luminance(candidate);
  q.highfreq_artifact = highfreq_artifact(yr, yc);
  q.banding = std::max(0.0, gap_fraction(yc) - gap_fraction(yr));
  return q;
}

NqdModel fit_nqd(const std::vector<QualityVector>& vectors) {
  if (vectors.size() < 20) throw ValidationError("NQD fitting needs at least 20 quality vectors");
  NqdModel m;
  m.fitted_on = vectors.size();
  for (int k = 0; k < kQualityMetricCount; ++k) {
    std::vector<double> vals;
    vals.reserve(vectors.size());
    for (const auto& v : vectors) vals.push_back(m.orientation[k] * v.values()[k]);
    m.anchors[k] = {quantile(vals, 0.10), quantile(vals, 0.90)};
  }
  return m;
}

std::array<double, kQualityMetricCount> nqd_components(const QualityVector& v, const NqdModel& model) {
  std::array<double, kQualityMetricCount> out{};
  const auto vals = v.values();
  for (int k = 0; k < kQualityMetricCount; ++k) {
    const auto& a = model.anchors[k];
    const double span = a.p90 - a.p10;
    if (!(span > 0.0)) {
      out[k] = 0.5;
      continue;
    }
    const double x = model.orientation[k] * vals[k];
    out[k] = std::clamp(0.1 + 0.8 * ((x - a.p10) / span), 0.0, 1.0);
  }
  return out;
}

double nqd_score(const QualityVector& v, const NqdModel& model) {
  // Averages positions t on the anchor scale, then maps once, so that inputs
  // sitting exactly on the anchors give exactly 0.1 / 0.9.
  const auto vals = v.values();
  double t_sum = 0.0;
  for (int k = 0; k < kQualityMetricCount; ++k) {
    const auto& a = model.anchors[k];
    const double span = a.p90 - a.p10;
    double t = 0.5;
    if (span > 0.0) {
      const double x = model.orientation[k] * vals[k];
      t = std::clamp((x - a.p10) / span, -0.125, 1.125);
    }
    t_sum += t;
  }
  return 0.1 + 0.8 * (t_sum / kQualityMetricCount);
}

}  // namespace wmarena
