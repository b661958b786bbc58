#include "codec_impl.hpp"
#include "wmarena/codec_geometry.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena::detail {

namespace {

namespace g = geometry;

class LatentSig final : public Codec {
 public:
  LatentSig() {
    desc_.id = "latent-sig";
    desc_.kind = CodecKind::multi_bit;
    desc_.capacity = g::kLatentSigBits;
    desc_.message_bits = g::kLatentSigBits;
    desc_.attack_capable = false;
    desc_.statistic = Statistic::bit_accuracy;
    desc_.direction = StatisticDirection::higher_is_watermarked;
    desc_.domain = "latent block DCT";
  }

  const CodecDescriptor& descriptor() const override { return desc_; }

  RgbImage embed(const RgbImage& img, const WatermarkKey& key, const std::optional<Payload>& payload,
                 double strength) const override {
    const ImagePlane y = luminance(img);
    const ImagePlane latent = downsample8(y);
    BlockDct b = block_dct(latent);
    const auto& slots = g::latent_sig_slots(latent.width(), latent.height());
    const double d = dither(key);
    const double step = g::kLatentSigStep * strength;
    for (const auto& s : slots) {
      double& c = b.blocks[s.block][s.zz];
      c = g::qim_embed(c, payload->bits[s.bit], d, step);
    }
    ImagePlane delta = block_idct(b);
    auto dd = delta.data();
    auto ld = latent.data();
    for (std::size_t i = 0; i < dd.size(); ++i) dd[i] -= ld[i];
    return replace_luminance(img, apply_latent_delta(y, delta)).clamped();
  }

  DetectionOutcome detect(const RgbImage& img, const WatermarkKey& key,
                          const std::optional<Payload>& reference) const override {
    const ImagePlane latent = downsample8(luminance(img));
    const BlockDct b = block_dct(latent);
    const auto& slots = g::latent_sig_slots(latent.width(), latent.height());
    const double d = dither(key);
    std::vector<std::uint8_t> bits(g::kLatentSigBits, 0);
    double conf = 0.0;
    for (const auto& s : slots) {
      const double c = b.blocks[s.block][s.zz];
      bits[s.bit] = static_cast<std::uint8_t>(g::qim_decide(c, d, g::kLatentSigStep));
      conf += g::qim_confidence(c, d, g::kLatentSigStep);
    }
    DetectionOutcome out;
    out.codec_id = desc_.id;
    out.statistic = desc_.statistic;
    out.lattice_fit = conf / static_cast<double>(slots.size());
    out.decode_ok = out.lattice_fit >= 0.75;
    std::vector<std::uint8_t> ref;
    if (reference) ref = reference->bits;
    score_multibit(out, bits, ref, bits, reference);
    return out;
  }

 private:
  static double dither(const WatermarkKey& key) {
    KeyedStream s(key, lanes::kPattern);
    return s.uniform();
  }

  CodecDescriptor desc_;
};

}  // namespace

std::unique_ptr<Codec> make_latent_sig() { return std::make_unique<LatentSig>(); }

}  // namespace wmarena::detail
