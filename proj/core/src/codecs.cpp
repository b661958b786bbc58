#include "wmarena/codecs.hpp"

#include <algorithm>
#include <cmath>

#include "codec_impl.hpp"
#include "wmarena/error.hpp"

namespace wmarena {

const char* to_string(CodecKind k) { return k == CodecKind::zero_bit ? "zero_bit" : "multi_bit"; }

const char* to_string(Statistic s) {
  switch (s) {
    case Statistic::bit_accuracy: return "bit_accuracy";
    case Statistic::l1_distance: return "l1_distance";
    case Statistic::p_value: return "p_value";
  }
  return "bit_accuracy";
}

const char* to_string(StatisticDirection d) {
  return d == StatisticDirection::higher_is_watermarked ? "higher_is_watermarked" : "lower_is_watermarked";
}

namespace {

struct Registry {
  std::vector<std::unique_ptr<Codec>> codecs;
  std::vector<CodecDescriptor> descriptors;

  Registry() {
    codecs.push_back(detail::make_ring_fft());
    codecs.push_back(detail::make_latent_sig());
    codecs.push_back(detail::make_chi2_ring());
    codecs.push_back(detail::make_ss_dct());
    codecs.push_back(detail::make_pix_add());
    codecs.push_back(detail::make_pix_wide());
    for (const auto& c : codecs) descriptors.push_back(c->descriptor());
  }
};

const Registry& the_registry() {
  static const Registry r;
  return r;
}

}  // namespace

const std::vector<CodecDescriptor>& registry() { return the_registry().descriptors; }

bool is_known_codec(std::string_view id) {
  for (const auto& d : registry())
    if (d.id == id) return true;
  return false;
}

const Codec& codec(std::string_view id) {
  for (const auto& c : the_registry().codecs)
    if (c->descriptor().id == id) return *c;
  throw ValidationError("unknown codec '" + std::string(id) + "'");
}

const CodecDescriptor& descriptor(std::string_view id) { return codec(id).descriptor(); }

namespace {

void check_key(const CodecDescriptor& d, const WatermarkKey& key) {
  if (key.codec_id != d.id)
    throw ValidationError("key belongs to codec '" + key.codec_id + "', not '" + d.id + "'");
}

void check_image(const RgbImage& img) {
  if (img.empty() || img.width() % 8 || img.height() % 8)
    throw ValidationError("image sides must be positive multiples of 8");
}

}  // namespace

RgbImage embed(std::string_view codec_id, const RgbImage& img, const WatermarkKey& key,
               const std::optional<Payload>& payload, double strength) {
  const Codec& c = codec(codec_id);
  const auto& d = c.descriptor();
  check_key(d, key);
  check_image(img);
  if (!(strength > 0.0) || !std::isfinite(strength)) throw ValidationError("strength must be positive");
  if (d.multi_bit()) {
    if (!payload) throw ValidationError(d.id + " needs a payload");
    if (static_cast<int>(payload->size()) != d.message_bits)
      throw ValidationError(d.id + " expects a " + std::to_string(d.message_bits) + "-bit payload, got " +
                            std::to_string(payload->size()));
  } else if (payload) {
    throw ValidationError(d.id + " is zero-bit and takes no payload");
  }
  return c.embed(img, key, payload, strength);
}

DetectionOutcome detect(std::string_view codec_id, const RgbImage& img, const WatermarkKey& key,
                        const std::optional<Payload>& reference) {
  const Codec& c = codec(codec_id);
  const auto& d = c.descriptor();
  check_key(d, key);
  check_image(img);
  if (reference && (!d.multi_bit() || static_cast<int>(reference->size()) != d.message_bits))
    throw ValidationError("reference payload does not fit codec " + d.id);
  return c.detect(img, key, reference);
}

std::optional<Payload> random_message(std::string_view codec_id, const WatermarkKey& key) {
  const auto& d = descriptor(codec_id);
  if (!d.multi_bit()) return std::nullopt;
  return random_payload(key, static_cast<std::size_t>(d.message_bits));
}

namespace detail {

void score_multibit(DetectionOutcome& out, const std::vector<std::uint8_t>& coded,
                    const std::vector<std::uint8_t>& coded_reference,
                    const std::vector<std::uint8_t>& message, const std::optional<Payload>& reference) {
  out.decoded_payload = Payload{message};
  if (reference) {
    out.bit_accuracy = wmarena::bit_accuracy(coded, coded_reference);
    out.message_accuracy = wmarena::bit_accuracy(message, reference->bits);
    out.score = *out.bit_accuracy;
  } else {
    out.score = out.lattice_fit;
  }
}

}  // namespace detail

}  // namespace wmarena
