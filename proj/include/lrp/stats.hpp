#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lrp {

/// Median of a sample; the mean of the two middle order statistics for even
/// sizes. Throws on an empty sample.
double median(std::span<const double> xs);
double mean(std::span<const double> xs);
/// Unbiased sample variance (0 for fewer than two values).
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);
double quantile(std::vector<double> xs, double q);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x. Throws FitFailure for fewer than two
/// distinct x values.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Complementary Kolmogorov distribution, P[K > lambda].
double kolmogorov_sf(double lambda);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double dof);

/// Upper tail of the standard normal.
double normal_sf(double z);

}  // namespace lrp
