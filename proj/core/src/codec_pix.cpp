#include "codec_impl.hpp"
#include "wmarena/codec_geometry.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena::detail {

namespace {

namespace g = geometry;

class PixCodec final : public Codec {
 public:
  PixCodec(std::string id, const g::PixConfig& cfg, std::string domain) : cfg_(cfg) {
    desc_.id = std::move(id);
    desc_.kind = CodecKind::multi_bit;
    desc_.capacity = cfg.bits;
    desc_.message_bits = cfg.bits;
    desc_.attack_capable = true;
    desc_.statistic = Statistic::bit_accuracy;
    desc_.direction = StatisticDirection::higher_is_watermarked;
    desc_.domain = std::move(domain);
  }

  const CodecDescriptor& descriptor() const override { return desc_; }

  RgbImage embed(const RgbImage& img, const WatermarkKey& key, const std::optional<Payload>& payload,
                 double strength) const override {
    const ImagePlane y = luminance(img);
    ImagePlane c = dct2_global(y);
    const auto& layout = g::pix_layout(cfg_, y.width(), y.height());
    const auto d = keyed_stream(key, lanes::kPattern, static_cast<std::size_t>(cfg_.bits));
    const double step =
        cfg_.base_step * g::level_multiplier(g::activity_level(g::block_activity(y))) * strength;
    auto cd = c.data();
    for (std::size_t i = 0; i < layout.flat.size(); ++i) {
      const int bit = layout.bit[i];
      cd[layout.flat[i]] = g::qim_embed(cd[layout.flat[i]], payload->bits[bit], d[bit], step);
    }
    return replace_luminance(img, idct2_global(c)).clamped();
  }

  DetectionOutcome detect(const RgbImage& img, const WatermarkKey& key,
                          const std::optional<Payload>& reference) const override {
    const ImagePlane y = luminance(img);
    const ImagePlane c = dct2_global(y);
    const auto& layout = g::pix_layout(cfg_, y.width(), y.height());
    const auto d = keyed_stream(key, lanes::kPattern, static_cast<std::size_t>(cfg_.bits));
    auto cd = c.data();

    // The embedder's activity level is not recoverable exactly; pick the
    // ladder step whose lattice the coefficients fit best.
    double best_fit = -1.0;
    double best_step = cfg_.base_step;
    for (int level = g::kPixLevelMin; level <= g::kPixLevelMax; ++level) {
      const double step = cfg_.base_step * g::level_multiplier(level);
      double fit = 0.0;
      for (std::size_t i = 0; i < layout.flat.size(); ++i)
        fit += g::qim_confidence(cd[layout.flat[i]], d[layout.bit[i]], step);
      fit /= static_cast<double>(layout.flat.size());
      if (fit > best_fit) {
        best_fit = fit;
        best_step = step;
      }
    }
    std::vector<int> votes(cfg_.bits, 0);
    for (std::size_t i = 0; i < layout.flat.size(); ++i)
      votes[layout.bit[i]] += g::qim_decide(cd[layout.flat[i]], d[layout.bit[i]], best_step);
    std::vector<std::uint8_t> bits(cfg_.bits);
    for (int i = 0; i < cfg_.bits; ++i) bits[i] = 2 * votes[i] > layout.per_bit;

    DetectionOutcome out;
    out.codec_id = desc_.id;
    out.statistic = desc_.statistic;
    out.lattice_fit = best_fit;
    out.decode_ok = best_fit >= 0.75;
    std::vector<std::uint8_t> ref;
    if (reference) ref = reference->bits;
    score_multibit(out, bits, ref, bits, reference);
    return out;
  }

 private:
  g::PixConfig cfg_;
  CodecDescriptor desc_;
};

}  // namespace

std::unique_ptr<Codec> make_pix_add() {
  return std::make_unique<PixCodec>("pix-add", g::pix_add_config(), "global DCT low-mid band");
}
std::unique_ptr<Codec> make_pix_wide() {
  return std::make_unique<PixCodec>("pix-wide", g::pix_wide_config(), "global DCT high band");
}

}  // namespace wmarena::detail
