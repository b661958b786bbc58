#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wmarena/image.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/payload.hpp"
#include "wmarena/stats.hpp"

namespace wmarena {

enum class CodecKind { zero_bit, multi_bit };
enum class Statistic { bit_accuracy, l1_distance, p_value };
enum class StatisticDirection { higher_is_watermarked, lower_is_watermarked };

const char* to_string(CodecKind k);
const char* to_string(Statistic s);
const char* to_string(StatisticDirection d);

struct CodecDescriptor {
  std::string id;
  CodecKind kind = CodecKind::zero_bit;
  int capacity = 0;      // coded bits carried by the image (0 for zero-bit)
  int message_bits = 0;  // bits the caller supplies at embed time
  bool attack_capable = false;
  Statistic statistic = Statistic::bit_accuracy;
  StatisticDirection direction = StatisticDirection::higher_is_watermarked;
  double default_strength = 1.0;
  std::string domain;  // human-readable embedding domain

  bool multi_bit() const { return kind == CodecKind::multi_bit; }
  /// Threshold direction matching the statistic direction.
  ScoreDirection score_direction() const {
    return direction == StatisticDirection::higher_is_watermarked ? ScoreDirection::greater_is_positive
                                                                  : ScoreDirection::less_is_positive;
  }
};

struct DetectionOutcome {
  std::string codec_id;
  double score = 0.0;  // the raw statistic
  Statistic statistic = Statistic::bit_accuracy;
  std::optional<double> bit_accuracy;      // raw, over the coded bits (needs a reference)
  std::optional<double> message_accuracy;  // after error correction (needs a reference)
  std::optional<Payload> decoded_payload;
  bool decode_ok = false;
  double lattice_fit = 0.0;  // multi-bit only: mean QIM confidence in [0,1]
};

/// Common embed/detect contract. Implementations are stateless.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual const CodecDescriptor& descriptor() const = 0;

  /// `payload` has descriptor().message_bits bits for multi-bit codecs and is
  /// absent for zero-bit ones. `strength` > 0.
  virtual RgbImage embed(const RgbImage& img, const WatermarkKey& key,
                         const std::optional<Payload>& payload, double strength) const = 0;

  /// With a reference payload, multi-bit outcomes carry raw and post-ECC
  /// accuracies and the score is the raw bit accuracy; without one the score
  /// is the lattice fit.
  virtual DetectionOutcome detect(const RgbImage& img, const WatermarkKey& key,
                                  const std::optional<Payload>& reference) const = 0;
};

/// Descriptors of the six codecs in fixed order:
/// ring-fft, latent-sig, chi2-ring, ss-dct, pix-add, pix-wide.
const std::vector<CodecDescriptor>& registry();

/// Throws ValidationError for an unknown id.
const Codec& codec(std::string_view id);
const CodecDescriptor& descriptor(std::string_view id);
bool is_known_codec(std::string_view id);

/// Validated entry points: unknown codec, key/codec mismatch, wrong payload
/// length and non-positive strength are ValidationErrors.
RgbImage embed(std::string_view codec_id, const RgbImage& img, const WatermarkKey& key,
               const std::optional<Payload>& payload, double strength = 1.0);
DetectionOutcome detect(std::string_view codec_id, const RgbImage& img, const WatermarkKey& key,
                        const std::optional<Payload>& reference = std::nullopt);

/// Random message of the right length for `codec_id` (empty for zero-bit codecs).
std::optional<Payload> random_message(std::string_view codec_id, const WatermarkKey& key);

}  // namespace wmarena
