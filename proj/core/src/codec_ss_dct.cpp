#include "codec_impl.hpp"
#include "wmarena/bch.hpp"
#include "wmarena/codec_geometry.hpp"
#include "wmarena/transforms.hpp"

namespace wmarena::detail {

namespace {

namespace g = geometry;

class SsDct final : public Codec {
 public:
  SsDct() {
    desc_.id = "ss-dct";
    desc_.kind = CodecKind::multi_bit;
    desc_.capacity = default_bch().padded_bits();
    desc_.message_bits = default_bch().data_bits();
    desc_.attack_capable = true;
    desc_.statistic = Statistic::bit_accuracy;
    desc_.direction = StatisticDirection::higher_is_watermarked;
    desc_.domain = "pixel 8x8 block DCT";
  }

  const CodecDescriptor& descriptor() const override { return desc_; }

  RgbImage embed(const RgbImage& img, const WatermarkKey& key, const std::optional<Payload>& payload,
                 double strength) const override {
    const auto coded = default_bch().encode(payload->bits);
    const ImagePlane y = luminance(img);
    BlockDct b = block_dct(y);
    const auto& layout = g::ss_dct_layout(y.width(), y.height());
    const auto d = dithers(key);
    const double step = g::kSsDctStep * strength;
    for (const auto& s : layout.slots) {
      double& c = b.blocks[s.block][s.zz];
      c = g::qim_embed(c, coded[s.bit], d[s.bit], step);
    }
    return replace_luminance(img, block_idct(b)).clamped();
  }

  DetectionOutcome detect(const RgbImage& img, const WatermarkKey& key,
                          const std::optional<Payload>& reference) const override {
    const ImagePlane y = luminance(img);
    const BlockDct b = block_dct(y);
    const auto& layout = g::ss_dct_layout(y.width(), y.height());
    const auto d = dithers(key);
    std::vector<int> votes(g::kSsDctCodedBits, 0);
    double conf = 0.0;
    for (const auto& s : layout.slots) {
      const double c = b.blocks[s.block][s.zz];
      votes[s.bit] += g::qim_decide(c, d[s.bit], g::kSsDctStep);
      conf += g::qim_confidence(c, d[s.bit], g::kSsDctStep);
    }
    std::vector<std::uint8_t> coded(g::kSsDctCodedBits);
    for (int i = 0; i < g::kSsDctCodedBits; ++i) coded[i] = 2 * votes[i] > layout.per_bit;

    const BchCode& bch = default_bch();
    DetectionOutcome out;
    out.codec_id = desc_.id;
    out.statistic = desc_.statistic;
    out.lattice_fit = conf / static_cast<double>(layout.slots.size());
    std::vector<std::uint8_t> message;
    if (auto decoded = bch.decode(coded)) {
      out.decode_ok = true;
      message = std::move(decoded->data);
    } else {
      message.assign(coded.begin(), coded.begin() + bch.data_bits());
    }
    std::vector<std::uint8_t> coded_ref;
    if (reference) coded_ref = bch.encode(reference->bits);
    score_multibit(out, coded, coded_ref, message, reference);
    return out;
  }

 private:
  static std::vector<double> dithers(const WatermarkKey& key) { return keyed_stream(key, lanes::kPattern, g::kSsDctCodedBits); }

  CodecDescriptor desc_;
};

}  // namespace

std::unique_ptr<Codec> make_ss_dct() { return std::make_unique<SsDct>(); }

}  // namespace wmarena::detail
