#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "wmarena/codec_geometry.hpp"
#include "wmarena/error.hpp"

namespace wmarena::geometry {

namespace {

double frac(double x) { return x - std::floor(x); }

double digamma_int(int n) {
  double s = -0.57721566490153286061;
  for (int k = 1; k < n; ++k) s += 1.0 / k;
  return s;
}

// Per-size caches for layouts; layouts are immutable once built.
template <typename T, typename Key, typename Build>
const T& cached(Key key, Build build) {
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<T>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<T>(build())).first;
  return *it->second;
}

}  // namespace

double qim_embed(double c, int bit, double dither, double step) {
  const double off = dither + 0.5 * bit;
  return (std::nearbyint(c / step - off) + off) * step;
}

int qim_decide(double c, double dither, double step) {
  const double f = frac(c / step - dither);
  return (f > 0.25 && f < 0.75) ? 1 : 0;
}

double qim_confidence(double c, double dither, double step) {
  const double f = frac(2.0 * (c / step - dither));
  return std::abs(f - 0.5) * 2.0;
}

std::complex<double> lattice_phasor(double c, double step) {
  return std::polar(1.0, 2.0 * std::numbers::pi * c / (0.5 * step));
}

int largest_odd_at_most(double x) {
  if (x < 1.0) return 0;
  int n = static_cast<int>(std::floor(x));
  if (n % 2 == 0) --n;
  return n;
}

const RingFftLayout& ring_fft_layout(int lw, int lh) {
  return cached<RingFftLayout>(std::make_pair(lw, lh), [&] {
    RingFftLayout l;
    l.latent_width = lw;
    l.latent_height = lh;
    l.pattern.resize(kRingCount);
    l.reference.resize(kRingCount);
    for (int v = -lh / 2; v < lh / 2; ++v)
      for (int u = -lw / 2; u < lw / 2; ++u) {
        const double r = normalized_radius(u, v, lw, lh);
        const int j = static_cast<int>(std::floor((r - kRingInner) / kRingWidth));
        if (r < kRingInner || j < 0 || j >= kRingCount) continue;
        if (even_comb(u, v)) {
          if (is_representative(u, v, lw, lh)) l.pattern[j].push_back({u, v});
        } else {
          l.reference[j].push_back({u, v});
        }
      }
    for (int j = 0; j < kRingCount; ++j)
      if (l.pattern[j].empty() || l.reference[j].empty())
        throw ValidationError("image too small for the ring-fft rings");
    return l;
  });
}

const Chi2Layout& chi2_layout(int w, int h) {
  return cached<Chi2Layout>(std::make_pair(w, h), [&] {
    Chi2Layout l;
    l.width = w;
    l.height = h;
    for (int v = -h / 2; v < h / 2; ++v)
      for (int u = -w / 2; u < w / 2; ++u) {
        if (!is_representative(u, v, w, h)) continue;
        const double r = normalized_radius(u, v, w, h);
        const bool in_mask = r >= kChi2Inner && r < kChi2Outer && even_comb(u, v);
        if (in_mask) {
          l.mask.push_back({u, v});
          l.mask_radius.push_back(r);
        } else {
          const double rr = r * 256.0;
          if (rr >= 1.0 && r < kChi2FitOuter) {
            l.fit.push_back({u, v});
            l.fit_radius.push_back(r);
            l.fit_bin.push_back(static_cast<int>(std::floor(2.0 * rr)));
          }
        }
      }
    if (l.mask.empty()) throw ValidationError("image too small for the chi2-ring mask");
    return l;
  });
}

std::vector<double> chi2_sigma(const Spectrum2D& s, const Chi2Layout& layout) {
  struct Bin {
    double log_r = 0.0;
    double power = 0.0;
    int n = 0;
  };
  std::map<int, Bin> bins;
  for (std::size_t i = 0; i < layout.fit.size(); ++i) {
    auto& b = bins[layout.fit_bin[i]];
    b.log_r += std::log(layout.fit_radius[i]);
    b.power += std::norm(s.at(layout.fit[i]));
    ++b.n;
  }
  // Weighted least squares of y = a + b x with weights n.
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [_, b] : bins) {
    const double x = b.log_r / b.n;
    const double mean_p = std::max(b.power / b.n, 1e-300);
    const double y = std::log(mean_p) + std::log(static_cast<double>(b.n)) - digamma_int(b.n);
    const double wgt = b.n;
    sw += wgt;
    sx += wgt * x;
    sy += wgt * y;
    sxx += wgt * x * x;
    sxy += wgt * x * y;
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw Error("chi2-ring spectrum fit is degenerate");
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / sw;
  std::vector<double> sigma(layout.mask.size());
  for (std::size_t i = 0; i < sigma.size(); ++i)
    sigma[i] = std::sqrt(std::exp(intercept + slope * std::log(layout.mask_radius[i])) / 2.0);
  return sigma;
}

const std::vector<BlockSlot>& latent_sig_slots(int lw, int lh) {
  using Slots = std::vector<BlockSlot>;
  return cached<Slots>(std::make_pair(lw, lh), [&] {
    if (lw % 8 || lh % 8 || lw == 0 || lh == 0)
      throw ValidationError("latent-sig needs images whose sides are multiples of 64");
    const int blocks = (lw / 8) * (lh / 8);
    Slots slots;
    for (int z = 3; z < 64 && static_cast<int>(slots.size()) < kLatentSigBits; ++z)
      for (int b = 0; b < blocks && static_cast<int>(slots.size()) < kLatentSigBits; ++b)
        slots.push_back({b, z, static_cast<int>(slots.size())});
    return slots;
  });
}

const SsDctLayout& ss_dct_layout(int w, int h) {
  return cached<SsDctLayout>(std::make_pair(w, h), [&] {
    const int blocks = (w / 8) * (h / 8);
    const int per_block = kSsDctZzLast - kSsDctZzFirst + 1;
    const int total = blocks * per_block;
    SsDctLayout l;
    l.per_bit = largest_odd_at_most(static_cast<double>(total) / kSsDctCodedBits);
    if (l.per_bit < 1) throw ValidationError("image too small for ss-dct");
    const int used = l.per_bit * kSsDctCodedBits;
    l.slots.reserve(used);
    for (int s = 0; s < used; ++s)
      l.slots.push_back({s / per_block, kSsDctZzFirst + s % per_block, s % kSsDctCodedBits});
    return l;
  });
}

const PixConfig& pix_add_config() {
  static const PixConfig c{96, 36.0 / 512.0, 84.0 / 512.0, 31, 0.15};
  return c;
}

const PixConfig& pix_wide_config() {
  static const PixConfig c{256, 160.0 / 512.0, 250.0 / 512.0, 15, 0.13};
  return c;
}

const PixLayout& pix_layout(const PixConfig& cfg, int w, int h) {
  return cached<PixLayout>(std::make_tuple(cfg.bits, w, h), [&] {
    std::vector<std::size_t> band;
    for (int ky = 0; ky < h; ++ky)
      for (int kx = 0; kx < w; ++kx) {
        const double a = kx / (2.0 * w);
        const double b = ky / (2.0 * h);
        const double r = std::sqrt(a * a + b * b);
        if (r >= cfg.band_low && r < cfg.band_high) band.push_back(static_cast<std::size_t>(ky) * w + kx);
      }
    PixLayout l;
    l.bits = cfg.bits;
    l.per_bit = std::min(cfg.per_bit, largest_odd_at_most(static_cast<double>(band.size()) / cfg.bits));
    if (l.per_bit < 1) throw ValidationError("image too small for the global-DCT codec band");
    const std::size_t need = static_cast<std::size_t>(l.per_bit) * cfg.bits;
    const std::size_t stride = band.size() / need;
    for (std::size_t i = 0; i < need; ++i) {
      l.flat.push_back(band[i * stride]);
      l.bit.push_back(static_cast<int>(i % cfg.bits));
    }
    return l;
  });
}

double block_activity(const ImagePlane& y) {
  const int bw = y.width() / 8;
  const int bh = y.height() / 8;
  if (bw == 0 || bh == 0) return 0.0;
  double total = 0.0;
  for (int by = 0; by < bh; ++by)
    for (int bx = 0; bx < bw; ++bx) {
      double s = 0.0, s2 = 0.0;
      for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) {
          const double v = y.at(8 * bx + i, 8 * by + j);
          s += v;
          s2 += v * v;
        }
      const double m = s / 64.0;
      total += std::sqrt(std::max(0.0, s2 / 64.0 - m * m));
    }
  return total / (bw * bh);
}

int activity_level(double activity) {
  if (!(activity > 0.0)) return kPixLevelMin;
  const double l = std::nearbyint(2.0 * std::log2(activity / kPixActivityReference));
  return static_cast<int>(std::clamp(l, static_cast<double>(kPixLevelMin), static_cast<double>(kPixLevelMax)));
}

double level_multiplier(int level) { return std::pow(2.0, level / 2.0); }

}  // namespace wmarena::geometry
