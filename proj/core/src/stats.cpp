#include "wmarena/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wmarena/error.hpp"

namespace wmarena {

const char* to_string(ScoreDirection d) {
  return d == ScoreDirection::greater_is_positive ? "greater_is_positive" : "less_is_positive";
}

ScoreDirection score_direction_from_string(const std::string& s) {
  if (s == "greater_is_positive") return ScoreDirection::greater_is_positive;
  if (s == "less_is_positive") return ScoreDirection::less_is_positive;
  throw ValidationError("unknown score direction '" + s + "'");
}

double bit_accuracy(std::span<const std::uint8_t> decoded, std::span<const std::uint8_t> truth) {
  if (decoded.size() != truth.size()) throw ValidationError("bit_accuracy: length mismatch");
  if (decoded.empty()) throw ValidationError("bit_accuracy: empty bit strings");
  std::size_t same = 0;
  for (std::size_t i = 0; i < decoded.size(); ++i) same += (decoded[i] & 1) == (truth[i] & 1);
  return static_cast<double>(same) / static_cast<double>(decoded.size());
}

Threshold calibrate_threshold(std::span<const double> negatives, ScoreDirection direction,
                              double target_fpr, std::string codec_id) {
  const std::size_t n = negatives.size();
  if (!(target_fpr > 0.0 && target_fpr < 1.0)) throw ValidationError("target FPR must lie in (0, 1)");
  if (n < 100)
    throw ValidationError("threshold calibration needs at least 100 negatives for FPR granularity, got " +
                          std::to_string(n));
  if (static_cast<double>(n) * target_fpr < 1.0)
    throw ValidationError("target FPR is below the 1/N resolution of the negative set");
  for (double s : negatives)
    if (!std::isfinite(s)) throw ValidationError("non-finite negative score");

  std::vector<double> v(negatives.begin(), negatives.end());
  const bool greater = direction == ScoreDirection::greater_is_positive;
  if (greater) std::sort(v.begin(), v.end());
  else std::sort(v.begin(), v.end(), std::greater<>());
  // Allowed exceedances.
  const auto allowed = static_cast<std::size_t>(std::floor(target_fpr * static_cast<double>(n) + 1e-9));
  // Walk the order statistics in decision order; the first value whose strict
  // exceedance count fits the budget is the smallest admissible threshold.
  double chosen = v.back();
  for (std::size_t i = 0; i < n; ++i) {
    const double cand = v[i];
    const auto beyond = greater
        ? static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), cand))
        : static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), cand, std::greater<>()));
    if (beyond <= allowed) {
      chosen = cand;
      break;
    }
  }
  return Threshold{std::move(codec_id), chosen, direction, target_fpr, n};
}

double tpr_at_threshold(std::span<const double> positives, const Threshold& threshold) {
  if (positives.empty()) throw ValidationError("tpr_at_threshold needs at least one positive");
  std::size_t hit = 0;
  for (double s : positives) hit += threshold.is_positive(s);
  return static_cast<double>(hit) / static_cast<double>(positives.size());
}

namespace {

double gamma_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * sum;
}

// Upper tail Q(a, x) by Lentz's continued fraction.
double gamma_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::min(1.0, gamma_series(a, x));
  return std::clamp(1.0 - gamma_continued_fraction(a, x), 0.0, 1.0);
}

double chi2_cdf(double x, double df) {
  if (!(df > 0.0)) throw ValidationError("chi2_cdf: df must be positive");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(df / 2.0, x / 2.0);
}

double noncentral_chi2_cdf(double x, double df, double lambda) {
  if (!(df > 0.0)) throw ValidationError("noncentral_chi2_cdf: df must be positive");
  if (!(lambda >= 0.0)) throw ValidationError("noncentral_chi2_cdf: lambda must be non-negative");
  if (x <= 0.0) return 0.0;
  if (lambda == 0.0) return chi2_cdf(x, df);
  const double half = lambda / 2.0;
  const auto mode = static_cast<long>(std::floor(half));
  auto log_weight = [&](long j) { return -half + j * std::log(half) - std::lgamma(j + 1.0); };

  double sum = 0.0;
  double mass = 0.0;
  // Upward from the mode, then downward; each side stops once its remaining
  // Poisson tail is below 1e-12 (or the terms vanish).
  for (long j = mode;; ++j) {
    const double w = std::exp(log_weight(j));
    sum += w * chi2_cdf(x, df + 2.0 * j);
    mass += w;
    // Tail beyond j is bounded by a geometric series with ratio half/(j+2).
    const double ratio = half / (j + 2.0);
    const double tail = ratio < 1.0 ? w * ratio / (1.0 - ratio) : 1.0;
    if (tail < 1e-12 && j > mode) break;
    if (j - mode > 100000) break;
  }
  for (long j = mode - 1; j >= 0; --j) {
    const double w = std::exp(log_weight(j));
    sum += w * chi2_cdf(x, df + 2.0 * j);
    mass += w;
    // Terms below j decrease at least geometrically with ratio j/half.
    const double ratio = j / half;
    const double tail = ratio < 1.0 ? w * ratio / (1.0 - ratio) : 1.0;
    if (tail < 1e-12) break;
  }
  (void)mass;
  return std::clamp(sum, 0.0, 1.0);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double ks_uniform_statistic(std::vector<double> values) {
  if (values.empty()) throw ValidationError("KS statistic of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats b;
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  b.count = values.size();
  b.q1 = quantile(values, 0.25);
  b.median = quantile(values, 0.5);
  b.q3 = quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo = b.q1 - 1.5 * iqr;
  const double hi = b.q3 + 1.5 * iqr;
  b.whisker_low = *std::find_if(values.begin(), values.end(), [&](double v) { return v >= lo; });
  b.whisker_high = *std::find_if(values.rbegin(), values.rend(), [&](double v) { return v <= hi; });
  b.mean = mean(values);
  return b;
}

}  // namespace wmarena
