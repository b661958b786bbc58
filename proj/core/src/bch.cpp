#include "wmarena/bch.hpp"

#include <set>

#include "wmarena/error.hpp"

namespace wmarena {

namespace {

unsigned primitive_for(int m) {
  switch (m) {
    case 3: return 0b1011;
    case 4: return 0b10011;
    case 5: return 0b100101;
    case 6: return 0b1000011;
    case 7: return 0b10001001;  // x^7 + x^3 + 1
    case 8: return 0b100011101;
    case 9: return 0b1000010001;
    case 10: return 0b10000001001;
    default: throw ValidationError("BCH field degree must be in [3, 10]");
  }
}

}  // namespace

BchCode::BchCode(BchParams params) : params_(params) {
  primitive_ = primitive_for(params.m);
  n_ = (1 << params.m) - 1;
  if (params.t < 1 || 2 * params.t >= n_) throw ValidationError("BCH t out of range");

  exp_.assign(2 * n_, 0);
  log_.assign(n_ + 1, -1);
  int x = 1;
  for (int i = 0; i < n_; ++i) {
    exp_[i] = x;
    log_[x] = i;
    x <<= 1;
    if (x & (1 << params.m)) x ^= static_cast<int>(primitive_);
  }
  for (int i = n_; i < 2 * n_; ++i) exp_[i] = exp_[i - n_];

  // Roots of g: the union of cyclotomic cosets of 1..2t.
  std::set<int> roots;
  for (int i = 1; i <= 2 * params.t; ++i) {
    int e = i % n_;
    do {
      roots.insert(e);
      e = (2 * e) % n_;
    } while (e != i % n_);
  }
  std::vector<int> g{1};  // GF(2^m) coefficients, x^i at index i
  for (int r : roots) {
    std::vector<int> next(g.size() + 1, 0);
    const int a = exp_[r];
    for (std::size_t i = 0; i < g.size(); ++i) {
      next[i + 1] ^= g[i];
      next[i] ^= gf_mul(g[i], a);
    }
    g = std::move(next);
  }
  generator_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > 1) throw Error("BCH generator has non-binary coefficient");
    generator_[i] = static_cast<std::uint8_t>(g[i]);
  }
  k_ = n_ - static_cast<int>(roots.size());
  if (params.shorten < 0 || params.shorten >= k_) throw ValidationError("BCH shortening out of range");
  if (params.pad < 0) throw ValidationError("BCH padding must be non-negative");
}

int BchCode::gf_mul(int a, int b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

int BchCode::gf_pow_alpha(long e) const {
  e %= n_;
  if (e < 0) e += n_;
  return exp_[e];
}

double BchCode::failure_bit_accuracy() const {
  return 1.0 - static_cast<double>(params_.t) / codeword_bits();
}

std::vector<std::uint8_t> BchCode::encode(std::span<const std::uint8_t> data) const {
  const int kd = data_bits();
  if (static_cast<int>(data.size()) != kd)
    throw ValidationError("BCH encode expects " + std::to_string(kd) + " data bits");
  const int r = parity_bits();
  // Remainder of d(x) * x^r modulo g(x); d_0 is the highest-degree coefficient.
  std::vector<std::uint8_t> rem(r, 0);  // rem[j] = coefficient of x^(r-1-j)
  for (int i = 0; i < kd; ++i) {
    const std::uint8_t feedback = (data[i] & 1) ^ rem[0];
    for (int j = 0; j + 1 < r; ++j) rem[j] = rem[j + 1] ^ (feedback & generator_[r - 1 - j]);
    rem[r - 1] = feedback & generator_[0];
  }
  std::vector<std::uint8_t> out;
  out.reserve(padded_bits());
  for (int i = 0; i < kd; ++i) out.push_back(data[i] & 1);
  out.insert(out.end(), rem.begin(), rem.end());
  out.resize(padded_bits(), 0);
  return out;
}

std::optional<BchDecoded> BchCode::decode(std::span<const std::uint8_t> received) const {
  if (static_cast<int>(received.size()) != padded_bits())
    throw ValidationError("BCH decode expects " + std::to_string(padded_bits()) + " bits");
  const int len = codeword_bits();
  const int t = params_.t;
  std::vector<std::uint8_t> word(received.begin(), received.begin() + len);
  for (auto& b : word) b &= 1;

  // Bit i carries the coefficient of x^(len-1-i).
  auto syndromes = [&](const std::vector<std::uint8_t>& w) {
    std::vector<int> s(2 * t + 1, 0);
    for (int j = 1; j <= 2 * t; ++j) {
      int acc = 0;
      for (int i = 0; i < len; ++i)
        if (w[i]) acc ^= gf_pow_alpha(static_cast<long>(j) * (len - 1 - i));
      s[j] = acc;
    }
    return s;
  };
  const auto s = syndromes(word);
  bool clean = true;
  for (int j = 1; j <= 2 * t; ++j) clean = clean && s[j] == 0;
  if (clean) return BchDecoded{{word.begin(), word.begin() + data_bits()}, 0};

  // Berlekamp-Massey over GF(2^m).
  std::vector<int> c(2 * t + 2, 0), b(2 * t + 2, 0);
  c[0] = b[0] = 1;
  int l = 0;
  int shift = 1;
  int bd = 1;
  for (int step = 0; step < 2 * t; ++step) {
    int d = s[step + 1];
    for (int i = 1; i <= l; ++i) d ^= gf_mul(c[i], s[step + 1 - i]);
    if (d == 0) {
      ++shift;
      continue;
    }
    const int coef = gf_mul(d, exp_[(n_ - log_[bd]) % n_]);
    auto prev = c;
    for (std::size_t i = 0; i + shift < c.size(); ++i) c[i + shift] ^= gf_mul(coef, b[i]);
    if (2 * l <= step) {
      l = step + 1 - l;
      b = std::move(prev);
      bd = d;
      shift = 1;
    } else {
      ++shift;
    }
  }
  if (l > t) return std::nullopt;

  // Chien search over the transmitted positions only: an error at exponent e
  // means Lambda(alpha^-e) = 0.
  std::vector<int> positions;
  for (int i = 0; i < len; ++i) {
    const long e = len - 1 - i;
    int acc = 0;
    for (int j = 0; j <= l; ++j)
      if (c[j]) acc ^= gf_mul(c[j], gf_pow_alpha(-e * j));
    if (acc == 0) positions.push_back(i);
  }
  if (static_cast<int>(positions.size()) != l) return std::nullopt;
  for (int i : positions) word[i] ^= 1;
  const auto check = syndromes(word);
  for (int j = 1; j <= 2 * t; ++j)
    if (check[j] != 0) return std::nullopt;
  return BchDecoded{{word.begin(), word.begin() + data_bits()}, l};
}

const BchCode& default_bch() {
  static const BchCode code{};
  return code;
}

}  // namespace wmarena
