#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wmarena {

struct BchParams {
  int m = 7;        // GF(2^m), n = 2^m - 1
  int t = 5;        // designed correction capacity
  int shorten = 36; // leading data positions fixed to zero and not transmitted
  int pad = 9;      // zero bits appended after the shortened codeword
};

struct BchDecoded {
  std::vector<std::uint8_t> data;
  int corrected = 0;
};

/// Binary narrow-sense BCH code, systematic (data then parity), shortened and
/// zero-padded. The primitive polynomial for m = 7 is x^7 + x^3 + 1.
class BchCode {
 public:
  explicit BchCode(BchParams params = {});

  int m() const { return params_.m; }
  int t() const { return params_.t; }
  int n() const { return n_; }
  int k() const { return k_; }
  int parity_bits() const { return n_ - k_; }
  int data_bits() const { return k_ - params_.shorten; }
  int codeword_bits() const { return n_ - params_.shorten; }
  int padded_bits() const { return codeword_bits() + params_.pad; }

  /// Raw bit accuracy below which more than t of the codeword bits are wrong:
  /// 1 - t / codeword_bits.
  double failure_bit_accuracy() const;

  /// Generator polynomial, coefficient of x^i at index i.
  const std::vector<std::uint8_t>& generator() const { return generator_; }
  /// Primitive polynomial as a bit mask (bit i = coefficient of x^i).
  unsigned primitive_polynomial() const { return primitive_; }

  /// Returns padded_bits() bits: data, parity, zero padding.
  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> data) const;

  /// Accepts padded_bits() bits (pad positions ignored). Empty when more than
  /// t errors are detected.
  std::optional<BchDecoded> decode(std::span<const std::uint8_t> received) const;

 private:
  int gf_mul(int a, int b) const;
  int gf_pow_alpha(long e) const;

  BchParams params_;
  int n_ = 0;
  int k_ = 0;
  unsigned primitive_ = 0;
  std::vector<int> exp_;  // alpha^i, length 2n
  std::vector<int> log_;
  std::vector<std::uint8_t> generator_;
};

/// Default code used by ss-dct: BCH(127, 92, t=5) shortened to (91, 56), padded to 100.
const BchCode& default_bch();

}  // namespace wmarena
