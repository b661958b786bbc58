#include "wmarena/keyed_stream.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <numbers>

#include "wmarena/error.hpp"

namespace wmarena {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw Error("SHA-256 initialisation failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_, data, n) != 1) throw Error("SHA-256 update failed");
  }
  void update(std::string_view s) { update(s.data(), s.size()); }
  void update_u64(std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    update(b, 8);
  }
  std::array<std::uint8_t, 32> finish() {
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, out.data(), &len) != 1 || len != 32)
      throw Error("SHA-256 finalisation failed");
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::array<std::uint8_t, 32> sha256(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.finish();
}

Seed256 Seed256::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw ValidationError("key must be 64 hex characters");
  Seed256 s;
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ValidationError("key contains a non-hex character");
    s.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return s;
}

std::string Seed256::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(64, '0');
  for (std::size_t i = 0; i < 32; ++i) {
    out[2 * i] = kDigits[bytes[i] >> 4];
    out[2 * i + 1] = kDigits[bytes[i] & 15];
  }
  return out;
}

Seed256 seed_from_integer(std::uint64_t value) {
  Sha256 h;
  h.update("wmarena/seed");
  h.update_u64(value);
  return Seed256{h.finish()};
}

Seed256 derive_seed(const Seed256& parent, std::string_view label, std::string_view text,
                    std::uint64_t index) {
  Sha256 h;
  h.update(parent.bytes.data(), parent.bytes.size());
  h.update(label);
  h.update("\0", 1);
  h.update(text);
  h.update("\0", 1);
  h.update_u64(index);
  return Seed256{h.finish()};
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

KeyedStream::KeyedStream(const WatermarkKey& key, std::uint64_t lane) {
  Sha256 h;
  h.update(key.seed.bytes.data(), key.seed.bytes.size());
  h.update(key.codec_id);
  h.update("\0", 1);
  h.update_u64(lane);
  const auto d = h.finish();
  key_ = {load_le32(d.data()), load_le32(d.data() + 4)};
  nonce_ = {load_le32(d.data() + 8), load_le32(d.data() + 12)};
}

void KeyedStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block_),
                                            static_cast<std::uint32_t>(block_ >> 32), nonce_[0],
                                            nonce_[1]};
  const auto out = philox4x32_10(ctr, key_);
  ++block_;
  buffer_[0] = static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
  buffer_[1] = static_cast<std::uint64_t>(out[2]) | (static_cast<std::uint64_t>(out[3]) << 32);
  buffered_ = 2;
}

std::uint64_t KeyedStream::next_u64() {
  if (buffered_ == 0) refill();
  return buffer_[2 - buffered_--];
}

double KeyedStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double KeyedStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  const double u1 = 1.0 - uniform();  // (0,1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::vector<double> keyed_stream(const WatermarkKey& key, std::uint64_t lane, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  if (count == 0) return out;
  KeyedStream s(key, lane);
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.uniform());
  return out;
}

}  // namespace wmarena
