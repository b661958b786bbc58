#include <gtest/gtest.h>

#include <cmath>

#include "wmarena/error.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/payload.hpp"
#include "wmarena/stats.hpp"

using namespace wmarena;

namespace {

WatermarkKey test_key() { return WatermarkKey{seed_from_integer(2024), "ss-dct"}; }

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(Philox, KnownAnswerZeroCounterZeroKey) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(Sha256, KnownAnswerAbc) {
  const auto d = sha256("abc");
  EXPECT_EQ(d[0], 0xba);
  EXPECT_EQ(d[1], 0x78);
  EXPECT_EQ(d[31], 0xad);
}

TEST(KeyedStream, ZeroCountIsEmpty) { EXPECT_TRUE(keyed_stream(test_key(), 0, 0).empty()); }

TEST(KeyedStream, Deterministic) { EXPECT_EQ(keyed_stream(test_key(), 1, 100), keyed_stream(test_key(), 1, 100)); }

TEST(KeyedStream, GoldenPrefix) {
  const auto v = keyed_stream(WatermarkKey{seed_from_integer(0), "ring-fft"}, 0, 4);
  const std::vector<double> golden = {0.433574367322621, 0.84411972518231038, 0.82450317627521963,
                                      0.63080663994137842};
  ASSERT_EQ(v.size(), golden.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_DOUBLE_EQ(v[i], golden[i]);
}

TEST(KeyedStream, MeanOfUniforms) {
  const auto v = keyed_stream(test_key(), 0, 100000);
  EXPECT_NEAR(mean(v), 0.5, 0.01);
  for (double x : v) ASSERT_TRUE(x >= 0.0 && x < 1.0);
}

TEST(KeyedStream, LanesAreUncorrelated) {
  EXPECT_LT(std::abs(pearson(keyed_stream(test_key(), 0, 10000), keyed_stream(test_key(), 1, 10000))), 0.05);
}

TEST(KeyedStream, CodecIdSeparatesStreams) {
  WatermarkKey other = test_key();
  other.codec_id = "pix-add";
  EXPECT_NE(keyed_stream(test_key(), 0, 8), keyed_stream(other, 0, 8));
}

TEST(KeyedStream, GaussianMoments) {
  KeyedStream s(test_key(), lanes::kAux);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double g = s.gaussian();
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Seed256, HexRoundtrip) {
  const Seed256 s = derive_seed(seed_from_integer(5), "x", "y", 3);
  EXPECT_EQ(s.hex().size(), 64u);
  EXPECT_EQ(Seed256::from_hex(s.hex()), s);
  EXPECT_THROW(Seed256::from_hex("zz"), ValidationError);
}

TEST(Seed256, DerivationSeparatesInputs) {
  const Seed256 p = seed_from_integer(1);
  EXPECT_NE(derive_seed(p, "a", "b", 0), derive_seed(p, "a", "b", 1));
  EXPECT_NE(derive_seed(p, "a", "b"), derive_seed(p, "a", "c"));
  EXPECT_NE(derive_seed(p, "ab", ""), derive_seed(p, "a", "b"));
}

TEST(Payload, ZeroLengthRejected) { EXPECT_THROW(random_payload(test_key(), 0), ValidationError); }

TEST(Payload, ReproducibleAndBalanced) {
  EXPECT_EQ(random_payload(test_key(), 56), random_payload(test_key(), 56));
  EXPECT_EQ(random_payload(test_key(), 56).size(), 56u);
  const Payload p = random_payload(test_key(), 10000);
  double ones = 0;
  for (auto b : p.bits) ones += b;
  EXPECT_NEAR(ones / 10000, 0.5, 0.02);
}

TEST(Payload, BitStringAndAscii) {
  EXPECT_EQ(Payload::from_bit_string("0110").to_bit_string(), "0110");
  EXPECT_EQ(Payload::from_ascii("A").to_bit_string(), "01000001");
  EXPECT_THROW(Payload::from_bit_string("012"), ValidationError);
}
