#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "teamchess/team/match.hpp"

namespace teamchess::analysis {

/// Stochastic superiority P(a > b) + 0.5 P(a = b) by exhaustive pair counting.
double a_w_pairwise(std::span<const double> a, std::span<const double> b);

/// Same statistic from mid-ranks of the pooled sample, O(n log n).
double a_w_ranked(std::span<const double> a, std::span<const double> b);

/// Pair-counting statistic with per-observation weights: each pair (i, j)
/// counts with weight wa[i] * wb[j]. Unit weights give a_w_pairwise.
double a_w_weighted(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                    std::span<const double> wb);

/// Default entry point; uses the rank path.
double a_w_effect_size(std::span<const double> a, std::span<const double> b);

struct ZTest {
  double z = 0.0;
  double p = 1.0;  // two-sided, normal reference
  /// Set when both standard errors are zero and the means differ.
  bool infinite = false;
};

/// z = (wdl1 - wdl2) / sqrt(sem1^2 + sem2^2).
ZTest wdl_z_test(const team::MatchStatistics& m1, const team::MatchStatistics& m2);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double t = 0.0;
  double p = 1.0;  // two-sided, slope = 0
  double ci_low = 0.0;
  double ci_high = 0.0;
  int df = 0;
  double r_squared = 0.0;
};

/// OLS of y on x with Student-t inference on n - 2 degrees of freedom.
/// Throws ContractError for fewer than 3 points and NumericError when x has
/// no spread.
RegressionResult trend_regression(std::span<const double> x, std::span<const double> y, double confidence = 0.95);

struct SlopeSummaryCheck {
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
};

/// Standard error, t and two-sided p implied by a published slope and its
/// symmetric confidence interval at `df` degrees of freedom.
SlopeSummaryCheck slope_from_interval(double slope, double ci_low, double ci_high, int df, double confidence = 0.95);

double two_sided_normal_p(double z);

struct BoxStats {
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  /// Farthest observations within 1.5 IQR of the quartiles.
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::size_t outliers = 0;
};

/// Quartiles by linear interpolation between order statistics. Throws
/// ContractError on an empty sample.
BoxStats box_stats(std::vector<double> values);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace teamchess::analysis
