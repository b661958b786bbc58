#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wmarena {

enum class ScoreDirection { greater_is_positive, less_is_positive };

const char* to_string(ScoreDirection d);
ScoreDirection score_direction_from_string(const std::string& s);

/// Detection threshold with a strict decision rule.
struct Threshold {
  std::string codec_id;
  double value = 0.0;
  ScoreDirection direction = ScoreDirection::greater_is_positive;
  double target_fpr = 0.01;
  std::size_t negatives_used = 0;

  bool is_positive(double score) const {
    return direction == ScoreDirection::greater_is_positive ? score > value : score < value;
  }
};

/// Fraction of equal positions. Lengths must match and be non-zero.
double bit_accuracy(std::span<const std::uint8_t> decoded, std::span<const std::uint8_t> truth);

/// Order-statistic threshold: for greater_is_positive, the smallest negative v
/// with |{s > v}| / N <= target_fpr (mirror image otherwise). Requires
/// N >= 100 and N * target_fpr >= 1.
Threshold calibrate_threshold(std::span<const double> negatives, ScoreDirection direction,
                              double target_fpr, std::string codec_id = {});

/// Fraction of scores on the positive side of the strict rule. Requires a nonempty set.
double tpr_at_threshold(std::span<const double> positives, const Threshold& threshold);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Central chi-squared CDF: P(df/2, x/2).
double chi2_cdf(double x, double df);

/// Non-central chi-squared CDF as a Poisson mixture of central CDFs, summed
/// outward from the Poisson mode until the remaining weight is below 1e-12.
double noncentral_chi2_cdf(double x, double df, double lambda);

/// Linear-interpolated empirical quantile (Hyndman-Fan type 7).
double quantile(std::vector<double> values, double q);

/// One-sample Kolmogorov-Smirnov statistic against Uniform(0,1).
double ks_uniform_statistic(std::vector<double> values);

double mean(std::span<const double> values);

/// Quartiles, Tukey whiskers (1.5 IQR, clipped to data) and mean.
struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};
BoxStats box_stats(std::vector<double> values);

}  // namespace wmarena
