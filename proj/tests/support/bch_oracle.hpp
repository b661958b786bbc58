#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

// Reference BCH generator and systematic encoder written independently of the
// library: GF(2^m) arithmetic by shift-and-reduce, minimal polynomials from
// cyclotomic cosets, parity by GF(2) long division.
namespace wmarena::testing {

class BchOracle {
 public:
  BchOracle(int m, int t, unsigned primitive) : m_(m), n_((1 << m) - 1), primitive_(primitive) {
    std::vector<int> g = {1};
    std::set<int> used;
    for (int j = 1; j <= 2 * t; ++j) {
      if (used.count(j % n_)) continue;
      std::vector<int> coset;
      for (int e = j % n_; !used.count(e); e = (2 * e) % n_) {
        used.insert(e);
        coset.push_back(e);
      }
      std::vector<int> minimal = {1};
      for (int e : coset) minimal = poly_mul(minimal, {alpha_pow(e), 1});
      for (int c : minimal)
        if (c > 1) throw std::logic_error("minimal polynomial left GF(2)");
      g = poly_mul(g, minimal);
    }
    generator_.assign(g.begin(), g.end());
  }

  /// Coefficient of x^i at index i.
  const std::vector<std::uint8_t>& generator() const { return generator_; }
  int parity_bits() const { return static_cast<int>(generator_.size()) - 1; }

  /// Parity of d(x) x^r mod g(x), data[0] being the highest-degree coefficient;
  /// returned highest degree first.
  std::vector<std::uint8_t> parity(const std::vector<std::uint8_t>& data) const {
    const int r = parity_bits();
    std::vector<std::uint8_t> dividend(data.begin(), data.end());
    dividend.resize(data.size() + r, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!dividend[i]) continue;
      for (int k = 0; k <= r; ++k) dividend[i + k] ^= generator_[r - k];
    }
    return {dividend.end() - r, dividend.end()};
  }

  /// Highest-degree-first polynomial modulo g(x) is zero.
  bool divisible(const std::vector<std::uint8_t>& word) const {
    std::vector<std::uint8_t> d(word);
    const int r = parity_bits();
    for (std::size_t i = 0; i + r < d.size(); ++i) {
      if (!d[i]) continue;
      for (int k = 0; k <= r; ++k) d[i + k] ^= generator_[r - k];
    }
    for (std::size_t i = d.size() - r; i < d.size(); ++i)
      if (d[i]) return false;
    return true;
  }

 private:
  int gf_mul(int a, int b) const {
    int out = 0;
    while (b) {
      if (b & 1) out ^= a;
      b >>= 1;
      a <<= 1;
      if (a & (1 << m_)) a ^= static_cast<int>(primitive_);
    }
    return out;
  }
  int alpha_pow(int e) const {
    int v = 1;
    for (int i = 0; i < e; ++i) v = gf_mul(v, 2);
    return v;
  }
  std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= gf_mul(a[i], b[j]);
    return out;
  }

  int m_;
  int n_;
  unsigned primitive_;
  std::vector<std::uint8_t> generator_;
};

}  // namespace wmarena::testing
