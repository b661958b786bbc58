#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "wmarena/error.hpp"
#include "wmarena/stats.hpp"

using namespace wmarena;

TEST(BitAccuracy, IdenticalComplementAndRandom) {
  const std::vector<std::uint8_t> a = {0, 1, 1, 0, 1};
  const std::vector<std::uint8_t> c = {1, 0, 0, 1, 0};
  EXPECT_DOUBLE_EQ(bit_accuracy(a, a), 1.0);
  EXPECT_DOUBLE_EQ(bit_accuracy(a, c), 0.0);
  std::mt19937_64 rng(1);
  std::vector<std::uint8_t> x(10000), y(10000);
  for (auto& b : x) b = rng() & 1;
  for (auto& b : y) b = rng() & 1;
  EXPECT_NEAR(bit_accuracy(x, y), 0.5, 0.02);
  EXPECT_THROW(bit_accuracy(a, std::vector<std::uint8_t>(4)), ValidationError);
  EXPECT_THROW(bit_accuracy(std::vector<std::uint8_t>{}, std::vector<std::uint8_t>{}), ValidationError);
}

TEST(Calibration, OneToHundredAtOnePercent) {
  std::vector<double> neg(100);
  std::iota(neg.begin(), neg.end(), 1.0);
  const Threshold t = calibrate_threshold(neg, ScoreDirection::greater_is_positive, 0.01);
  EXPECT_DOUBLE_EQ(t.value, 99.0);
  EXPECT_DOUBLE_EQ(tpr_at_threshold(neg, t), 0.01);
  EXPECT_EQ(t.negatives_used, 100u);
}

TEST(Calibration, LowerIsPositiveMirrors) {
  std::vector<double> neg(100);
  std::iota(neg.begin(), neg.end(), 1.0);
  const Threshold t = calibrate_threshold(neg, ScoreDirection::less_is_positive, 0.01);
  EXPECT_DOUBLE_EQ(t.value, 2.0);
  EXPECT_DOUBLE_EQ(tpr_at_threshold(neg, t), 0.01);
}

TEST(Calibration, AllEqualNegativesGiveZeroFpr) {
  const std::vector<double> neg(200, 0.5);
  const Threshold t = calibrate_threshold(neg, ScoreDirection::greater_is_positive, 0.01);
  EXPECT_DOUBLE_EQ(t.value, 0.5);
  EXPECT_DOUBLE_EQ(tpr_at_threshold(neg, t), 0.0);
}

TEST(Calibration, GranularityErrors) {
  EXPECT_THROW(calibrate_threshold(std::vector<double>(50, 0.0), ScoreDirection::greater_is_positive, 0.01),
               ValidationError);
  EXPECT_THROW(calibrate_threshold(std::vector<double>(100, 0.0), ScoreDirection::greater_is_positive, 0.001),
               ValidationError);
  EXPECT_THROW(calibrate_threshold(std::vector<double>(100, 0.0), ScoreDirection::greater_is_positive, 0.0),
               ValidationError);
}

TEST(Tpr, StrictRuleAndHandCount) {
  Threshold t;
  t.value = 0.6;
  EXPECT_DOUBLE_EQ(tpr_at_threshold(std::vector<double>{0.7, 0.9, 1.0}, t), 1.0);
  EXPECT_DOUBLE_EQ(tpr_at_threshold(std::vector<double>{0.6, 0.6}, t), 0.0);
  const std::vector<double> mixed = {0.1, 0.61, 0.6, 0.95, 0.3, 0.7, 0.59, 0.8, 0.6001, 0.2};
  EXPECT_DOUBLE_EQ(tpr_at_threshold(mixed, t), 0.5);
  EXPECT_THROW(tpr_at_threshold(std::vector<double>{}, t), ValidationError);
}

TEST(Chi2, ClosedForms) {
  EXPECT_DOUBLE_EQ(chi2_cdf(0.0, 3.0), 0.0);
  EXPECT_NEAR(chi2_cdf(2.0 * std::log(2.0), 2.0), 0.5, 1e-14);
  for (double x : {0.1, 1.0, 5.0, 30.0}) EXPECT_NEAR(chi2_cdf(x, 2.0), 1.0 - std::exp(-x / 2), 1e-13);
  EXPECT_NEAR(chi2_cdf(1.0, 1.0), std::erf(1.0 / std::sqrt(2.0)), 1e-13);
}

TEST(Chi2, MedianOfFiveDegrees) {
  std::mt19937_64 rng(99);
  std::chi_squared_distribution<double> dist(5.0);
  std::vector<double> draws(1000000);
  for (double& d : draws) d = dist(rng);
  std::nth_element(draws.begin(), draws.begin() + draws.size() / 2, draws.end());
  EXPECT_NEAR(chi2_cdf(draws[draws.size() / 2], 5.0), 0.5, 5e-4);
  EXPECT_NEAR(chi2_cdf(4.351, 5.0), 0.5, 5e-4);
}

TEST(NoncentralChi2, ZeroLambdaIsCentral) {
  for (double df : {1.0, 2.0, 7.0, 30.0})
    for (double x : {0.5, 3.0, 10.0, 40.0}) EXPECT_NEAR(noncentral_chi2_cdf(x, df, 0.0), chi2_cdf(x, df), 1e-10);
  EXPECT_DOUBLE_EQ(noncentral_chi2_cdf(0.0, 4.0, 3.0), 0.0);
}

TEST(NoncentralChi2, MatchesSumOfShiftedNormals) {
  // df 16, lambda 25: one coordinate shifted by 5, fifteen centred.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  const int n = 200000;
  std::vector<double> samples(n);
  for (double& s : samples) {
    double acc = 0;
    for (int k = 0; k < 16; ++k) {
      const double v = z(rng) + (k == 0 ? 5.0 : 0.0);
      acc += v * v;
    }
    s = acc;
  }
  for (double x : {20.0, 35.0, 41.0, 50.0, 70.0}) {
    double below = 0;
    for (double s : samples) below += s <= x;
    EXPECT_NEAR(noncentral_chi2_cdf(x, 16.0, 25.0), below / n, 4e-3) << "x=" << x;
  }
}

TEST(NoncentralChi2, LargeLambdaStaysInRange) {
  const double p = noncentral_chi2_cdf(2000.0, 10.0, 2000.0);
  EXPECT_GT(p, 0.4);
  EXPECT_LT(p, 0.6);
}

TEST(Quantile, Type7OnOneToHundred) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_NEAR(quantile(v, 0.10), 10.9, 1e-12);
  EXPECT_NEAR(quantile(v, 0.90), 90.1, 1e-12);
  std::reverse(v.begin(), v.end());
  EXPECT_NEAR(quantile(v, 0.10), 10.9, 1e-12);
}

TEST(Ks, UniformGridAndPointMass) {
  std::vector<double> grid(100);
  for (int i = 0; i < 100; ++i) grid[i] = (i + 0.5) / 100.0;
  EXPECT_NEAR(ks_uniform_statistic(grid), 0.005, 1e-12);
  EXPECT_NEAR(ks_uniform_statistic(std::vector<double>(10, 0.0)), 1.0, 1e-12);
}

TEST(BoxStats, QuartilesWhiskersMean) {
  std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  const BoxStats b = box_stats(v);
  EXPECT_DOUBLE_EQ(b.median, 5.5);
  EXPECT_DOUBLE_EQ(b.q1, 3.25);
  EXPECT_DOUBLE_EQ(b.q3, 7.75);
  EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
  EXPECT_DOUBLE_EQ(b.whisker_high, 9.0);
  EXPECT_DOUBLE_EQ(b.mean, 14.5);
  EXPECT_EQ(b.count, 10u);
}
