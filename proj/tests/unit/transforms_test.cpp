#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "wmarena/error.hpp"
#include "wmarena/transforms.hpp"

using namespace wmarena;

namespace {

ImagePlane random_plane(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  ImagePlane p(w, h);
  for (double& v : p.data()) v = d(rng);
  return p;
}

double dct_basis(int k, int n, int size) {
  const double a = k == 0 ? std::sqrt(1.0 / size) : std::sqrt(2.0 / size);
  return a * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * size));
}

}  // namespace

TEST(Luminance, GrayAndRed) {
  RgbImage gray(4, 4, 0.3);
  const ImagePlane yg = luminance(gray);
  for (double v : yg.data()) EXPECT_NEAR(v, 0.3, 1e-15);
  RgbImage red(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) red.at(x, y, 0) = 1.0;
  const ImagePlane yr = luminance(red);
  for (double v : yr.data()) EXPECT_DOUBLE_EQ(v, 0.299);
}

TEST(Luminance, ReplaceThenExtractIsIdentity) {
  RgbImage img(16, 16);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(0, 1);
  for (double& v : img.samples()) v = d(rng);
  const ImagePlane y = random_plane(16, 16, 9);
  const ImagePlane back = luminance(replace_luminance(img, y));
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(back.data()[i], y.data()[i], 1e-9);
}

TEST(Fft, ConstantPlaneHasOnlyDc) {
  const Spectrum2D s = fft2(ImagePlane(32, 16, 0.25));
  EXPECT_NEAR(s.at(0, 0).real(), 0.25 * std::sqrt(32.0 * 16.0), 1e-12);
  double rest = 0;
  for (int v = -8; v < 8; ++v)
    for (int u = -16; u < 16; ++u)
      if (u || v) rest += std::abs(s.at(u, v));
  EXPECT_LT(rest, 1e-10);
}

TEST(Fft, RoundtripAndParseval) {
  const ImagePlane x = random_plane(64, 64, 1);
  const Spectrum2D s = fft2(x);
  const ImagePlane back = ifft2(s);
  double ex = 0, es = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(back.data()[i], x.data()[i], 1e-9);
    ex += x.data()[i] * x.data()[i];
  }
  for (const auto& c : s.data()) es += std::norm(c);
  EXPECT_NEAR(es / ex, 1.0, 1e-9);
}

TEST(Fft, MatchesDirectDft) {
  const ImagePlane x = random_plane(8, 8, 2);
  const Spectrum2D s = fft2(x);
  for (int v = -4; v < 4; ++v)
    for (int u = -4; u < 4; ++u) {
      Complex acc = 0;
      for (int y = 0; y < 8; ++y)
        for (int xx = 0; xx < 8; ++xx)
          acc += x.at(xx, y) * std::polar(1.0, -2.0 * std::numbers::pi * (u * xx + v * y) / 8.0);
      acc /= 8.0;
      EXPECT_NEAR(std::abs(acc - s.at(u, v)), 0.0, 1e-12);
    }
}

TEST(Fft, HermitianSetKeepsInverseReal) {
  Spectrum2D s(16, 16);
  s.set_hermitian({3, -2}, Complex(1.0, 2.0));
  EXPECT_EQ(s.at(-3, 2), Complex(1.0, -2.0));
  const Spectrum2D back = fft2(ifft2(s));
  EXPECT_NEAR(std::abs(back.at(3, -2) - Complex(1.0, 2.0)), 0.0, 1e-12);
}

TEST(RingMask, FullDiskListsEveryConjugatePairOnce) {
  const RingMask m = ring_mask(64, 64, 0.0, std::sqrt(0.5));
  // 64*64 coefficients; 4 are self-conjugate (DC and the three Nyquist points).
  // The outer bound is exclusive, which drops only the (-32, -32) corner.
  EXPECT_EQ(m.indices.size(), (64u * 64u - 4u) / 2u + 3u);
}

TEST(RingMask, AnnulusCountMatchesBruteForce) {
  const RingMask m = ring_mask(64, 64, 0.4, 0.45);
  std::set<std::pair<int, int>> seen;
  std::size_t count = 0;
  for (int v = -32; v < 32; ++v)
    for (int u = -32; u < 32; ++u) {
      const double r = std::sqrt((u / 64.0) * (u / 64.0) + (v / 64.0) * (v / 64.0));
      if (r < 0.4 || r >= 0.45) continue;
      const int cu = u == -32 ? -32 : -u;
      const int cv = v == -32 ? -32 : -v;
      if (seen.count({cu, cv})) continue;
      seen.insert({u, v});
      ++count;
    }
  EXPECT_EQ(m.indices.size(), count);
  for (const auto& f : m.indices) EXPECT_TRUE(is_representative(f.u, f.v, 64, 64));
}

TEST(RingMask, InvalidRadiiRejected) {
  EXPECT_THROW(ring_mask(64, 64, 0.3, 0.3), ValidationError);
  EXPECT_THROW(ring_mask(64, 64, 0.3, 0.2), ValidationError);
}

TEST(BlockDct, ConstantBlock) {
  const BlockDct d = block_dct(ImagePlane(8, 8, 0.4));
  EXPECT_NEAR(d.block(0, 0)[0], 8 * 0.4, 1e-12);
  for (int k = 1; k < 64; ++k) EXPECT_NEAR(d.block(0, 0)[k], 0.0, 1e-12);
}

TEST(BlockDct, MatchesDirectFormulaAndRoundtrips) {
  const ImagePlane x = random_plane(16, 8, 4);
  const BlockDct d = block_dct(x);
  const auto& zz = zigzag_order();
  for (int bx = 0; bx < 2; ++bx)
    for (int k = 0; k < 64; ++k) {
      const auto [row, col] = zz[k];
      double acc = 0;
      for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) acc += x.at(8 * bx + i, j) * dct_basis(row, j, 8) * dct_basis(col, i, 8);
      EXPECT_NEAR(d.block(bx, 0)[k], acc, 1e-12);
    }
  const ImagePlane back = block_idct(d);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back.data()[i], x.data()[i], 1e-9);
}

TEST(BlockDct, ImpulseGivesUnitEnergyBasis) {
  BlockDct d = block_dct(ImagePlane(8, 8));
  d.block(0, 0)[10] = 1.0;
  const ImagePlane b = block_idct(d);
  double e = 0;
  for (double v : b.data()) e += v * v;
  EXPECT_NEAR(e, 1.0, 1e-12);
}

TEST(BlockDct, ZigzagStartsLikeJpeg) {
  const auto& zz = zigzag_order();
  EXPECT_EQ(zz[0], std::make_pair(0, 0));
  EXPECT_EQ(zz[1], std::make_pair(0, 1));
  EXPECT_EQ(zz[2], std::make_pair(1, 0));
  EXPECT_EQ(zz[3], std::make_pair(2, 0));
  EXPECT_EQ(zz[63], std::make_pair(7, 7));
}

TEST(GlobalDct, MatchesDirectFormulaAndRoundtrips) {
  const ImagePlane x = random_plane(16, 8, 5);
  const ImagePlane c = dct2_global(x);
  for (int ky = 0; ky < 8; ++ky)
    for (int kx = 0; kx < 16; ++kx) {
      double acc = 0;
      for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 16; ++i) acc += x.at(i, j) * dct_basis(kx, i, 16) * dct_basis(ky, j, 8);
      EXPECT_NEAR(c.at(kx, ky), acc, 1e-12);
    }
  const ImagePlane back = idct2_global(c);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back.data()[i], x.data()[i], 1e-9);
}

TEST(Latent, ConstantAndCheckerboard) {
  const ImagePlane d = downsample8(ImagePlane(64, 32, 0.7));
  EXPECT_EQ(d.width(), 8);
  EXPECT_EQ(d.height(), 4);
  for (double v : d.data()) EXPECT_NEAR(v, 0.7, 1e-15);
  ImagePlane cb(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) cb.at(x, y) = (x + y) % 2;
  const ImagePlane dc = downsample8(cb);
  for (double v : dc.data()) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Latent, ZeroDeltaLeavesLatentUnchanged) {
  const ImagePlane x = random_plane(64, 64, 6);
  const ImagePlane y = apply_latent_delta(x, ImagePlane(8, 8));
  const ImagePlane a = downsample8(x);
  const ImagePlane b = downsample8(y);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-12);
}

TEST(Latent, DeltaIsReproducedExactly) {
  const ImagePlane x = random_plane(64, 64, 7);
  const ImagePlane delta = random_plane(8, 8, 8);
  const ImagePlane a = downsample8(x);
  const ImagePlane b = downsample8(apply_latent_delta(x, delta));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.data()[i] - a.data()[i], delta.data()[i], 1e-12);
}
