#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wmarena {

/// 256-bit opaque secret. Serialized as 64 lowercase hex characters.
struct Seed256 {
  std::array<std::uint8_t, 32> bytes{};

  static Seed256 from_hex(std::string_view hex);
  std::string hex() const;

  friend bool operator==(const Seed256&, const Seed256&) = default;
  friend auto operator<=>(const Seed256&, const Seed256&) = default;
};

/// Seed for a plain integer (used for synthetic images and CLI --seed).
Seed256 seed_from_integer(std::uint64_t value);

/// Child seed: SHA-256 over (parent, label, text, index). Used to hand out
/// per-image / per-victim keys from a run seed.
Seed256 derive_seed(const Seed256& parent, std::string_view label, std::string_view text = {},
                    std::uint64_t index = 0);

/// Secret material of one codec instance. All codec randomness is a pure
/// function of (seed, codec_id, lane).
struct WatermarkKey {
  Seed256 seed;
  std::string codec_id;

  friend bool operator==(const WatermarkKey&, const WatermarkKey&) = default;
};

/// Fixed lane assignments. Lanes are independent streams of the same key.
namespace lanes {
inline constexpr std::uint64_t kPayload = 0;
inline constexpr std::uint64_t kPattern = 1;
inline constexpr std::uint64_t kAux = 2;
}  // namespace lanes

/// Counter-mode keyed PRF: Philox4x32-10 keyed by the first 8 bytes of
/// SHA-256(seed || codec_id || 0x00 || lane_le64), with bytes 8..15 of the
/// digest as the upper half of the 128-bit counter. Each block yields two
/// doubles built from the top 53 bits of consecutive 64-bit words.
class KeyedStream {
 public:
  KeyedStream(const WatermarkKey& key, std::uint64_t lane);

  /// Uniform in [0,1).
  double uniform();
  /// Standard normal via Box-Muller on two consecutive uniforms.
  double gaussian();
  std::uint64_t next_u64();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 2> nonce_{};
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> keyed_stream(const WatermarkKey& key, std::uint64_t lane, std::size_t count);

/// Raw Philox4x32-10 block function (exposed for known-answer tests).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SHA-256 helper shared by key derivation and corpus hashing.
std::array<std::uint8_t, 32> sha256(std::string_view data);

}  // namespace wmarena
