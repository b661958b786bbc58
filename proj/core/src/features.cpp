#include "wmarena/features.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "wmarena/codec_geometry.hpp"
#include "wmarena/error.hpp"
#include "wmarena/parallel.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena {

namespace g = geometry;

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    char buf[32];
    for (int i = 0; i < 32; ++i) {
      std::snprintf(buf, sizeof buf, "radial_%02d", i);
      n.push_back(buf);
    }
    for (int j = 0; j < g::kRingCount; ++j) n.push_back("ring_comb_" + std::to_string(j));
    for (int j = 0; j < g::kRingCount; ++j) n.push_back("ring_disp_" + std::to_string(j));
    n.push_back("band_comb_0");
    n.push_back("band_comb_1");
    for (const char* s : {"dct_mean_lo", "dct_mean_mid", "dct_mean_hi", "dct_kurt_lo", "dct_kurt_mid", "dct_kurt_hi"})
      n.push_back(s);
    for (const char* s : {"resid_logvar", "resid_skew", "resid_kurt"}) n.push_back(s);
    for (const char* s : {"lattice_latent-sig", "lattice_ss-dct", "lattice_pix-add", "lattice_pix-wide"})
      n.push_back(s);
    return n;
  }();
  return names;
}

namespace {

struct Moments {
  double n = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  void add(double x) {
    n += 1;
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
  }
  double mean() const { return n > 0 ? s1 / n : 0.0; }
  double variance() const {
    if (n <= 0) return 0.0;
    const double m = mean();
    return std::max(0.0, s2 / n - m * m);
  }
  double skewness() const {
    const double v = variance();
    if (!(v > 0.0)) return 0.0;
    const double m = mean();
    const double m3 = s3 / n - 3 * m * s2 / n + 2 * m * m * m;
    return m3 / std::pow(v, 1.5);
  }
  double kurtosis() const {
    const double v = variance();
    if (!(v > 0.0)) return 0.0;
    const double m = mean();
    const double m4 = s4 / n - 4 * m * s3 / n + 6 * m * m * s2 / n - 3 * m * m * m * m;
    return m4 / (v * v);
  }
};

double safe_log(double x) { return std::log(std::max(x, 0.0) + kFeatureLogFloor); }

void radial_features(const Spectrum2D& s, std::vector<double>& out) {
  std::vector<double> power(32, 0.0);
  std::vector<int> count(32, 0);
  for (int v = -s.height() / 2; v < s.height() / 2; ++v)
    for (int u = -s.width() / 2; u < s.width() / 2; ++u) {
      if (u == 0 && v == 0) continue;
      const double r = normalized_radius(u, v, s.width(), s.height());
      const int b = static_cast<int>(std::floor(r * 64.0));
      if (b >= 32) continue;
      power[b] += std::norm(s.at(u, v));
      ++count[b];
    }
  for (int b = 0; b < 32; ++b) out.push_back(safe_log(count[b] ? power[b] / count[b] : 0.0));
}

double coefficient_of_variation(const Moments& m) {
  const double mu = m.mean();
  return mu > 0.0 ? std::sqrt(m.variance()) / mu : 0.0;
}

void ring_features(const ImagePlane& latent, std::vector<double>& out) {
  std::vector<double> comb(g::kRingCount, 0.0);
  std::vector<double> disp(g::kRingCount, 0.0);
  try {
    const auto& layout = g::ring_fft_layout(latent.width(), latent.height());
    const Spectrum2D s = fft2(latent);
    for (int j = 0; j < g::kRingCount; ++j) {
      Moments even, odd;
      double pe = 0.0, po = 0.0;
      for (const auto& f : layout.pattern[j]) {
        const double a = std::abs(s.at(f));
        even.add(a);
        pe += a * a;
      }
      for (const auto& f : layout.reference[j]) {
        const double a = std::abs(s.at(f));
        odd.add(a);
        po += a * a;
      }
      comb[j] = safe_log(pe / even.n) - safe_log(po / odd.n);
      const double cv_odd = coefficient_of_variation(odd);
      disp[j] = cv_odd > 0.0 ? coefficient_of_variation(even) / cv_odd : 0.0;
    }
  } catch (const ValidationError&) {
  }
  out.insert(out.end(), comb.begin(), comb.end());
  out.insert(out.end(), disp.begin(), disp.end());
}

void band_comb_features(const Spectrum2D& s, std::vector<double>& out) {
  const double edges[3] = {g::kChi2Inner, 0.0375, g::kChi2Outer};
  for (int band = 0; band < 2; ++band) {
    double pe = 0.0, po = 0.0;
    int ne = 0, no = 0;
    for (int v = -s.height() / 2; v < s.height() / 2; ++v)
      for (int u = -s.width() / 2; u < s.width() / 2; ++u) {
        const double r = normalized_radius(u, v, s.width(), s.height());
        if (r < edges[band] || r >= edges[band + 1]) continue;
        if (g::even_comb(u, v)) {
          pe += std::norm(s.at(u, v));
          ++ne;
        } else {
          po += std::norm(s.at(u, v));
          ++no;
        }
      }
    out.push_back(ne && no ? safe_log(pe / ne) - safe_log(po / no) : 0.0);
  }
}

void block_dct_features(const BlockDct& d, std::vector<double>& out) {
  const int bands[3][2] = {{1, 5}, {6, 14}, {15, 30}};
  double means[3];
  double kurts[3];
  for (int b = 0; b < 3; ++b) {
    Moments m, a;
    for (const auto& block : d.blocks)
      for (int z = bands[b][0]; z <= bands[b][1]; ++z) {
        m.add(block[z]);
        a.add(std::abs(block[z]));
      }
    means[b] = a.mean();
    kurts[b] = m.kurtosis();
  }
  for (double v : means) out.push_back(v);
  for (double v : kurts) out.push_back(v);
}

void residual_features(const ImagePlane& y, std::vector<double>& out) {
  Moments m;
  for (int j = 1; j + 1 < y.height(); ++j)
    for (int i = 1; i + 1 < y.width(); ++i)
      m.add(4.0 * y.at(i, j) - y.at(i - 1, j) - y.at(i + 1, j) - y.at(i, j - 1) - y.at(i, j + 1));
  out.push_back(safe_log(m.variance()));
  out.push_back(m.skewness());
  out.push_back(m.kurtosis());
}

// Mean over groups of |mean lattice phasor| within each group.
template <typename Groups>
double concentration(const Groups& groups, double step) {
  double total = 0.0;
  for (const auto& group : groups) {
    std::complex<double> acc = 0.0;
    for (double c : group) acc += g::lattice_phasor(c, step);
    total += group.empty() ? 0.0 : std::abs(acc) / static_cast<double>(group.size());
  }
  return groups.empty() ? 0.0 : total / static_cast<double>(groups.size());
}

double latent_sig_distance(const ImagePlane& latent) {
  try {
    const auto& slots = g::latent_sig_slots(latent.width(), latent.height());
    const BlockDct d = block_dct(latent);
    std::vector<std::vector<double>> groups(1);
    for (const auto& s : slots) groups[0].push_back(d.blocks[s.block][s.zz]);
    return 1.0 - concentration(groups, g::kLatentSigStep);
  } catch (const ValidationError&) {
    return 1.0;
  }
}

double ss_dct_distance(const ImagePlane& y, const BlockDct& d) {
  try {
    const auto& layout = g::ss_dct_layout(y.width(), y.height());
    std::vector<std::vector<double>> groups(g::kSsDctCodedBits);
    for (const auto& s : layout.slots) groups[s.bit].push_back(d.blocks[s.block][s.zz]);
    return 1.0 - concentration(groups, g::kSsDctStep);
  } catch (const ValidationError&) {
    return 1.0;
  }
}

double pix_distance(const ImagePlane& coeffs, const g::PixConfig& cfg) {
  try {
    const auto& layout = g::pix_layout(cfg, coeffs.width(), coeffs.height());
    std::vector<std::vector<double>> groups(layout.bits);
    auto data = coeffs.data();
    for (std::size_t i = 0; i < layout.flat.size(); ++i) groups[layout.bit[i]].push_back(data[layout.flat[i]]);
    double best = 0.0;
    for (int level = g::kPixLevelMin; level <= g::kPixLevelMax; ++level)
      best = std::max(best, concentration(groups, cfg.base_step * g::level_multiplier(level)));
    return 1.0 - best;
  } catch (const ValidationError&) {
    return 1.0;
  }
}

}  // namespace

std::vector<double> extract_features(const RgbImage& input) {
  const RgbImage img = (input.width() % 8 || input.height() % 8) ? pad_to_multiple_of_8(input) : input;
  if (img.width() < 8 || img.height() < 8) throw ValidationError("feature extraction needs at least 8x8 pixels");
  const ImagePlane y = luminance(img);
  std::vector<double> f;
  f.reserve(kFeatureCount);

  const Spectrum2D s = fft2(y);
  radial_features(s, f);
  const ImagePlane latent = downsample8(y);
  ring_features(latent, f);
  band_comb_features(s, f);
  const BlockDct d = block_dct(y);
  block_dct_features(d, f);
  residual_features(y, f);
  f.push_back(latent_sig_distance(latent));
  f.push_back(ss_dct_distance(y, d));
  const ImagePlane coeffs = dct2_global(y);
  f.push_back(pix_distance(coeffs, g::pix_add_config()));
  f.push_back(pix_distance(coeffs, g::pix_wide_config()));
  for (double& v : f)
    if (!std::isfinite(v)) v = 0.0;
  return f;
}

std::vector<std::vector<double>> extract_features_batch(const std::vector<const RgbImage*>& images, int jobs) {
  std::vector<std::vector<double>> out(images.size());
  parallel_for(images.size(), jobs, [&](std::size_t i) { out[i] = extract_features(*images[i]); });
  return out;
}

}  // namespace wmarena
