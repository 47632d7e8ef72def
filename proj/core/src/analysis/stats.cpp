#include "teamchess/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "teamchess/util/errors.hpp"

namespace teamchess::analysis {
namespace {

void require_groups(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ContractError("A_w needs two non-empty groups");
}

}  // namespace

double a_w_pairwise(std::span<const double> a, std::span<const double> b) {
  require_groups(a, b);
  double wins = 0.0;
  for (double x : a)
    for (double y : b) wins += x > y ? 1.0 : x == y ? 0.5 : 0.0;
  return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double a_w_ranked(std::span<const double> a, std::span<const double> b) {
  require_groups(a, b);
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(a.size() + b.size());
  for (double x : a) pooled.emplace_back(x, true);
  for (double y : b) pooled.emplace_back(y, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  // Twice the rank sum of group A, using mid-ranks for ties; integral, so exact.
  long double twice_rank_sum = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    std::size_t in_a = 0;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) in_a += pooled[j++].second ? 1 : 0;
    // Ranks i+1 .. j have mid-rank (i + 1 + j) / 2.
    twice_rank_sum += static_cast<long double>(in_a) * static_cast<long double>(i + 1 + j);
    i = j;
  }
  const long double na = a.size(), nb = b.size();
  const long double u = twice_rank_sum / 2 - na * (na + 1) / 2;
  return static_cast<double>(u / (na * nb));
}

double a_w_weighted(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                    std::span<const double> wb) {
  require_groups(a, b);
  if (wa.size() != a.size() || wb.size() != b.size()) throw ContractError("one weight per observation");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (wa[i] < 0 || wb[j] < 0) throw ContractError("weights must be non-negative");
      const double w = wa[i] * wb[j];
      num += w * (a[i] > b[j] ? 1.0 : a[i] == b[j] ? 0.5 : 0.0);
      den += w;
    }
  if (den <= 0.0) throw ContractError("total weight must be positive");
  return num / den;
}

double a_w_effect_size(std::span<const double> a, std::span<const double> b) { return a_w_ranked(a, b); }

double two_sided_normal_p(double z) {
  if (std::isinf(z)) return 0.0;
  const boost::math::normal_distribution<double> n;
  return 2.0 * boost::math::cdf(boost::math::complement(n, std::abs(z)));
}

ZTest wdl_z_test(const team::MatchStatistics& m1, const team::MatchStatistics& m2) {
  if (m1.games() == 0 || m2.games() == 0) throw ContractError("z test needs two non-empty matches");
  ZTest t;
  const double diff = m1.wdl - m2.wdl;
  const double se = std::hypot(m1.sem, m2.sem);
  if (se == 0.0) {
    if (diff == 0.0) return t;
    t.infinite = true;
    t.z = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    t.p = 0.0;
    return t;
  }
  t.z = diff / se;
  t.p = two_sided_normal_p(t.z);
  return t;
}

RegressionResult trend_regression(std::span<const double> x, std::span<const double> y, double confidence) {
  if (x.size() != y.size()) throw ContractError("x and y differ in length");
  if (x.size() < 3) throw ContractError("trend regression needs at least 3 points");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ContractError("confidence must be in (0, 1)");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw NumericError("slope undefined: all x values are identical");
  RegressionResult r;
  r.df = static_cast<int>(x.size()) - 2;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    sse += e * e;
  }
  r.r_squared = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
  r.slope_se = std::sqrt(sse / r.df / sxx);
  const boost::math::students_t_distribution<double> t(r.df);
  const double crit = boost::math::quantile(boost::math::complement(t, (1.0 - confidence) / 2));
  r.ci_low = r.slope - crit * r.slope_se;
  r.ci_high = r.slope + crit * r.slope_se;
  if (r.slope_se == 0.0) {
    r.t = r.slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.slope);
    r.p = r.slope == 0.0 ? 1.0 : 0.0;
  } else {
    r.t = r.slope / r.slope_se;
    r.p = 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(r.t)));
  }
  return r;
}

SlopeSummaryCheck slope_from_interval(double slope, double ci_low, double ci_high, int df, double confidence) {
  if (df < 1) throw ContractError("degrees of freedom must be positive");
  if (!(ci_high > ci_low)) throw ContractError("interval must have positive width");
  const boost::math::students_t_distribution<double> t(df);
  const double crit = boost::math::quantile(boost::math::complement(t, (1.0 - confidence) / 2));
  SlopeSummaryCheck c;
  c.se = (ci_high - ci_low) / (2.0 * crit);
  c.t = slope / c.se;
  c.p = 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(c.t)));
  return c;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ContractError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> v) {
  if (v.empty()) throw ContractError("box statistics of an empty sample");
  std::sort(v.begin(), v.end());
  BoxStats b;
  b.n = v.size();
  b.min = v.front();
  b.max = v.back();
  b.q1 = quantile_sorted(v, 0.25);
  b.median = quantile_sorted(v, 0.5);
  b.q3 = quantile_sorted(v, 0.75);
  b.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= lo_fence; });
  b.whisker_high = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= hi_fence; });
  b.outliers = static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [&](double x) { return x < lo_fence || x > hi_fence; }));
  return b;
}

}  // namespace teamchess::analysis
