#include <cmath>

#include "codec_impl.hpp"
#include "wmarena/codec_geometry.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena::detail {

namespace {

namespace g = geometry;

class Chi2Ring final : public Codec {
 public:
  Chi2Ring() {
    desc_.id = "chi2-ring";
    desc_.kind = CodecKind::zero_bit;
    desc_.attack_capable = true;
    desc_.statistic = Statistic::p_value;
    desc_.direction = StatisticDirection::lower_is_watermarked;
    desc_.domain = "full-frame FFT ring";
  }

  const CodecDescriptor& descriptor() const override { return desc_; }

  RgbImage embed(const RgbImage& img, const WatermarkKey& key, const std::optional<Payload>&,
                 double strength) const override {
    const double alpha = overwrite_fraction(strength);
    const ImagePlane y = luminance(img);
    Spectrum2D s = fft2(y);
    const auto& layout = g::chi2_layout(s.width(), s.height());
    const auto sigma = g::chi2_sigma(s, layout);
    const auto w = pattern(key, sigma);
    for (std::size_t i = 0; i < layout.mask.size(); ++i) {
      const Complex cur = s.at(layout.mask[i]);
      s.set_hermitian(layout.mask[i], (1.0 - alpha) * cur + alpha * w[i]);
    }
    return replace_luminance(img, ifft2(s)).clamped();
  }

  DetectionOutcome detect(const RgbImage& img, const WatermarkKey& key,
                          const std::optional<Payload>&) const override {
    const Spectrum2D s = fft2(luminance(img));
    const auto& layout = g::chi2_layout(s.width(), s.height());
    const auto sigma = g::chi2_sigma(s, layout);
    const auto w = pattern(key, sigma);
    double stat = 0.0;
    double lambda = 0.0;
    for (std::size_t i = 0; i < layout.mask.size(); ++i) {
      const Complex diff = s.at(layout.mask[i]) - w[i];
      stat += std::norm(diff) / (sigma[i] * sigma[i]);
      lambda += std::norm(w[i]) / (sigma[i] * sigma[i]);
    }
    DetectionOutcome out;
    out.codec_id = desc_.id;
    out.statistic = desc_.statistic;
    const double df = 2.0 * static_cast<double>(layout.mask.size());
    out.score = stat > 0.0 ? noncentral_chi2_cdf(stat, df, lambda) : 0.0;
    return out;
  }

 private:
  static std::vector<Complex> pattern(const WatermarkKey& key, const std::vector<double>& sigma) {
    KeyedStream rng(key, lanes::kPattern);
    std::vector<Complex> w(sigma.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      w[i] = g::kChi2PatternScale * sigma[i] * Complex(re, im);
    }
    return w;
  }

  CodecDescriptor desc_;
};

}  // namespace

std::unique_ptr<Codec> make_chi2_ring() { return std::make_unique<Chi2Ring>(); }

}  // namespace wmarena::detail
