#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmarena/image.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/payload.hpp"

namespace wmarena {

enum class AttackKind { identity, rewatermark, noise, blur, jpeg_quant, resize_restore };

const char* to_string(AttackKind k);

/// Attack identifiers: "identity", "rw:<codec>", "noise:<sigma>", "blur:<sigma>",
/// "jpeg:<step>", "resize:<scale>" (numbers in %g form).
struct AttackSpec {
  std::string id;
  AttackKind kind = AttackKind::identity;
  std::string codec_id;  // rewatermark only
  double strength = 1.0; // rewatermark only
  double level = 0.0;    // sigma, quantizer step (x/255) or scale factor

  bool is_rewatermark() const { return kind == AttackKind::rewatermark; }
  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

AttackSpec identity_attack();
/// Throws ValidationError unless the codec is attack-capable.
AttackSpec rewatermark_attack(const std::string& codec_id, double strength = 1.0);
AttackSpec baseline_attack(AttackKind kind, double level);
/// Inverse of AttackSpec::id.
AttackSpec parse_attack(const std::string& id);

/// One spec per level. Empty levels or a non-baseline kind are errors.
std::vector<AttackSpec> baseline_sweep(AttackKind kind, const std::vector<double>& levels);
/// noise {0.01, 0.02, 0.05}, blur {0.5, 1, 2}, jpeg {4, 8, 16}, resize {0.5, 0.75}.
std::vector<AttackSpec> default_baselines();
/// Rewatermark specs for every attack-capable codec, registry order.
std::vector<AttackSpec> rewatermark_attacks();

/// What the attacker did; lets forgery recovery be evaluated afterwards.
struct AttackReceipt {
  std::string attack_id;
  std::optional<WatermarkKey> attacker_key;
  std::optional<Payload> attacker_payload;
};

struct AttackResult {
  RgbImage image;
  AttackReceipt receipt;
};

/// Deterministic in (spec, img, rng_key). Never consults victim keys.
/// Rewatermarking draws the attacker key from rng_key and, for multi-bit
/// codecs, a fresh random message.
AttackResult apply_attack(const AttackSpec& spec, const RgbImage& img, const WatermarkKey& rng_key);

/// Attacker key a rewatermark spec would draw from rng_key.
WatermarkKey rewatermark_key(const AttackSpec& spec, const WatermarkKey& rng_key);

RgbImage add_gaussian_noise(const RgbImage& img, double sigma, const WatermarkKey& rng_key);
RgbImage gaussian_blur(const RgbImage& img, double sigma);
RgbImage jpeg_quantize(const RgbImage& img, double step);
RgbImage resize_restore(const RgbImage& img, double scale);

}  // namespace wmarena
