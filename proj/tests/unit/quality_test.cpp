#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

#include "test_support.hpp"
#include "wmarena/attacks.hpp"
#include "wmarena/error.hpp"
#include "wmarena/quality.hpp"

using namespace wmarena;
using wmarena::testing::test_image;

namespace {

QualityVector vector_at(double base) {
  QualityVector v;
  v.mse = base;
  v.psnr = 60.0 - 10.0 * base;
  v.ssim = 1.0 - 0.01 * base;
  v.mean_delta_e = 2.0 * base;
  v.highfreq_artifact = 0.1 * base;
  v.banding = 0.001 * base;
  return v;
}

std::vector<QualityVector> ladder() {
  std::vector<QualityVector> out;
  for (int i = 1; i <= 100; ++i) out.push_back(vector_at(i));
  return out;
}

}  // namespace

TEST(Quality, IdenticalImages) {
  const RgbImage img = test_image(1);
  const QualityVector q = quality_vector(img, img);
  EXPECT_EQ(q.mse, 0.0);
  EXPECT_EQ(q.psnr, kPsnrCap);
  EXPECT_EQ(q.ssim, 1.0);
  EXPECT_EQ(q.mean_delta_e, 0.0);
  EXPECT_NEAR(ssim_luminance(img, img), 1.0, 1e-12);
}

TEST(Quality, UniformOffsetClosedForm) {
  RgbImage a(64, 64, 0.4);
  RgbImage b(64, 64, 0.5);
  const QualityVector q = quality_vector(a, b);
  EXPECT_NEAR(q.mse, 0.01, 1e-12);
  EXPECT_NEAR(q.psnr, 20.0, 1e-9);
  EXPECT_GT(q.mean_delta_e, 0.0);
}

TEST(Quality, NoisePsnrMatchesSigma) {
  double sum = 0;
  for (int i = 0; i < 50; ++i) {
    const RgbImage img = test_image(10 + i);
    sum += psnr(img, add_gaussian_noise(img, 0.02, WatermarkKey{seed_from_integer(i), "attack"}));
  }
  EXPECT_NEAR(sum / 50, 33.98, 0.3);
}

TEST(Quality, ShapeMismatchRejected) {
  EXPECT_THROW(quality_vector(RgbImage(16, 16), RgbImage(16, 8)), ValidationError);
}

TEST(Quality, BlurDegradesSsimAndHighFrequencies) {
  const RgbImage img = test_image(2);
  const QualityVector mild = quality_vector(img, gaussian_blur(img, 0.5));
  const QualityVector strong = quality_vector(img, gaussian_blur(img, 2.0));
  EXPECT_LT(strong.ssim, mild.ssim);
  EXPECT_GT(strong.highfreq_artifact, mild.highfreq_artifact);
}

TEST(Nqd, AnchorsFromTypeSevenQuantiles) {
  const NqdModel m = fit_nqd(ladder());
  EXPECT_NEAR(m.anchors[0].p10, 10.9, 1e-12);
  EXPECT_NEAR(m.anchors[0].p90, 90.1, 1e-12);
  EXPECT_EQ(m.fitted_on, 100u);
}

TEST(Nqd, AnchorsIndependentOfInputOrder) {
  auto v = ladder();
  const NqdModel a = fit_nqd(v);
  std::mt19937 rng(4);
  std::shuffle(v.begin(), v.end(), rng);
  const NqdModel b = fit_nqd(v);
  for (int k = 0; k < kQualityMetricCount; ++k) {
    EXPECT_EQ(a.anchors[k].p10, b.anchors[k].p10);
    EXPECT_EQ(a.anchors[k].p90, b.anchors[k].p90);
  }
}

TEST(Nqd, ExactAnchorsScoreExactlyPointOneAndPointNine) {
  const NqdModel m = fit_nqd(ladder());
  auto at_anchor = [&](bool high) {
    std::array<double, kQualityMetricCount> x{};
    for (int k = 0; k < kQualityMetricCount; ++k)
      x[k] = m.orientation[k] * (high ? m.anchors[k].p90 : m.anchors[k].p10);
    QualityVector v;
    v.mse = x[0];
    v.psnr = x[1];
    v.ssim = x[2];
    v.mean_delta_e = x[3];
    v.highfreq_artifact = x[4];
    v.banding = x[5];
    return v;
  };
  EXPECT_EQ(nqd_score(at_anchor(false), m), 0.1);
  EXPECT_EQ(nqd_score(at_anchor(true), m), 0.9);
}

TEST(Nqd, DegenerateMetricContributesHalf) {
  std::vector<QualityVector> same(30, vector_at(5));
  const NqdModel m = fit_nqd(same);
  EXPECT_DOUBLE_EQ(nqd_score(vector_at(50), m), 0.5);
  for (double c : nqd_components(vector_at(50), m)) EXPECT_DOUBLE_EQ(c, 0.5);
}

TEST(Nqd, ComponentsClampBeyondLinearRange) {
  const NqdModel m = fit_nqd(ladder());
  for (double c : nqd_components(vector_at(1000), m)) EXPECT_DOUBLE_EQ(c, 1.0);
  for (double c : nqd_components(vector_at(-1000), m)) EXPECT_DOUBLE_EQ(c, 0.0);
  EXPECT_LE(nqd_score(vector_at(1000), m), 1.0);
  EXPECT_GE(nqd_score(vector_at(-1000), m), 0.0);
}

TEST(Nqd, MonotoneInDegradation) {
  const NqdModel m = fit_nqd(ladder());
  EXPECT_LT(nqd_score(vector_at(30), m), nqd_score(vector_at(60), m));
}

TEST(Nqd, NeedsTwentyVectors) { EXPECT_THROW(fit_nqd(std::vector<QualityVector>(19)), ValidationError); }
