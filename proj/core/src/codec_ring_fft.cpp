#include <cmath>

#include "codec_impl.hpp"
#include "wmarena/codec_geometry.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena::detail {

namespace {

namespace g = geometry;

class RingFft final : public Codec {
 public:
  RingFft() {
    desc_.id = "ring-fft";
    desc_.kind = CodecKind::zero_bit;
    desc_.attack_capable = false;
    desc_.statistic = Statistic::l1_distance;
    desc_.direction = StatisticDirection::lower_is_watermarked;
    desc_.domain = "latent FFT rings";
  }

  const CodecDescriptor& descriptor() const override { return desc_; }

  RgbImage embed(const RgbImage& img, const WatermarkKey& key, const std::optional<Payload>&,
                 double strength) const override {
    const double alpha = overwrite_fraction(strength);
    const ImagePlane y = luminance(img);
    const ImagePlane latent = downsample8(y);
    const Spectrum2D f = fft2(latent);
    const auto& layout = g::ring_fft_layout(latent.width(), latent.height());
    const auto c = ring_constants(key);

    Spectrum2D out = f;
    for (int j = 0; j < g::kRingCount; ++j) {
      const double rho = reference_rms(f, layout.reference[j]);
      for (const auto& idx : layout.pattern[j]) {
        const Complex v = f.at(idx);
        const double mag = std::abs(v);
        const double target = (1.0 - alpha) * mag + alpha * c[j] * rho;
        const double phase = mag > 0.0 ? std::arg(v) : 0.0;
        out.set_hermitian(idx, std::polar(target, phase));
      }
    }
    ImagePlane delta = ifft2(out);
    auto dd = delta.data();
    auto ld = latent.data();
    for (std::size_t i = 0; i < dd.size(); ++i) dd[i] -= ld[i];
    return replace_luminance(img, apply_latent_delta(y, delta)).clamped();
  }

  DetectionOutcome detect(const RgbImage& img, const WatermarkKey& key,
                          const std::optional<Payload>&) const override {
    const ImagePlane latent = downsample8(luminance(img));
    const Spectrum2D f = fft2(latent);
    const auto& layout = g::ring_fft_layout(latent.width(), latent.height());
    const auto c = ring_constants(key);
    double total = 0.0;
    std::size_t count = 0;
    for (int j = 0; j < g::kRingCount; ++j) {
      const double rho = std::max(reference_rms(f, layout.reference[j]), 1e-300);
      for (const auto& idx : layout.pattern[j]) {
        total += std::abs(std::abs(f.at(idx)) / rho - c[j]);
        ++count;
      }
    }
    DetectionOutcome out;
    out.codec_id = desc_.id;
    out.statistic = desc_.statistic;
    out.score = total / static_cast<double>(count);
    return out;
  }

 private:
  static std::vector<double> ring_constants(const WatermarkKey& key) {
    KeyedStream s(key, lanes::kPattern);
    std::vector<double> c(g::kRingCount);
    for (double& v : c) v = 1.05 + 0.4 * s.uniform();
    return c;
  }

  static double reference_rms(const Spectrum2D& f, const std::vector<FreqIndex>& members) {
    double s = 0.0;
    for (const auto& idx : members) s += std::norm(f.at(idx));
    return std::sqrt(s / static_cast<double>(members.size()));
  }

  CodecDescriptor desc_;
};

}  // namespace

std::unique_ptr<Codec> make_ring_fft() { return std::make_unique<RingFft>(); }

}  // namespace wmarena::detail
