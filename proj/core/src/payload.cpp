#include "wmarena/payload.hpp"

#include "wmarena/error.hpp"

namespace wmarena {

std::string Payload::to_bit_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Payload Payload::from_bit_string(std::string_view text) {
  Payload p;
  p.bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ValidationError("message bit string may only contain 0 and 1");
    p.bits.push_back(c == '1');
  }
  return p;
}

Payload Payload::from_ascii(std::string_view text) {
  Payload p;
  for (unsigned char c : text)
    for (int i = 7; i >= 0; --i) p.bits.push_back((c >> i) & 1);
  return p;
}

Payload random_payload(const WatermarkKey& key, std::size_t length) {
  if (length == 0) throw ValidationError("payload length must be positive");
  KeyedStream s(key, lanes::kPayload);
  Payload p;
  p.bits.reserve(length);
  for (std::size_t i = 0; i < length; ++i) p.bits.push_back(s.uniform() >= 0.5 ? 1 : 0);
  return p;
}

}  // namespace wmarena
