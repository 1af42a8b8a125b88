#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace berrylab {

double normal_cdf(double x);
double normal_quantile(double p);
/// Two-sided z value for a confidence level, e.g. 0.95 -> 1.95996.
double two_sided_z(double confidence);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  /// Normal-approximation half width at the requested confidence.
  double radius = 0.0;
  std::size_t count = 0;
};

/// Sample mean with CLT radius; sums in index order so results replay exactly.
MeanEstimate estimate_mean(std::span<const double> xs, double confidence);

/// Difference of two independent means with combined radius.
MeanEstimate difference(const MeanEstimate& a, const MeanEstimate& b, double confidence);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Survival function of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// One-sample KS test against the standard normal.
KsResult ks_test_normal(std::vector<double> xs);
/// Two-sample KS test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t n, double confidence);

struct PowerFit {
  /// y ~ prefactor * x^(-exponent)
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log y against log x; all inputs must be positive.
PowerFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

}  // namespace berrylab
