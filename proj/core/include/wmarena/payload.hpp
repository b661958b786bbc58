#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wmarena/keyed_stream.hpp"

namespace wmarena {

/// Ordered message bits (each 0 or 1).
struct Payload {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }

  /// "0110..." form.
  std::string to_bit_string() const;
  static Payload from_bit_string(std::string_view text);
  /// 8 bits per character, most significant bit first.
  static Payload from_ascii(std::string_view text);

  friend bool operator==(const Payload&, const Payload&) = default;
};

/// Bits drawn from the payload lane of `key`, thresholded at 0.5.
Payload random_payload(const WatermarkKey& key, std::size_t length);

}  // namespace wmarena
