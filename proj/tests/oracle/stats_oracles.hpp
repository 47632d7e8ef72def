#pragma once

#include <vector>

namespace oracle {

struct OlsFit {
  double slope;
  double intercept;
  double slope_se;
  double ci_low;
  double ci_high;
  double p;
};

/// Least squares through a Householder QR of the design matrix [1 x]; the
/// slope variance comes from inv(R) rather than closed-form sums.
OlsFit ols_qr(const std::vector<double>& x, const std::vector<double>& y, double confidence = 0.95);

/// Student t CDF by composite Simpson integration of the density.
double t_cdf(double t, int df);

/// Inverse of t_cdf by bisection.
double t_quantile(double p, int df);

/// Stochastic superiority by explicit enumeration of the pair list.
double a_by_enumeration(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
