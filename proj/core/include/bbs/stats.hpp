#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bbs {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

/// Upper tail P(chi^2_df > x).
double chi_square_sf(double x, double df);

/// Kolmogorov distribution tail Q(l) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 l^2).
double kolmogorov_sf(double lambda);

struct KsResult {
  double distance = 0;
  double p_value = 1;
};

/// One-sample KS distance against a continuous CDF.
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS distance, asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0;
  double df = 0;
  double p_value = 1;
  std::size_t bins = 0;    // after pooling
  std::size_t pooled = 0;  // cells merged into the pooled bin
};

/// Pearson statistic sum (O - E)^2 / E. Cells with expected count below
/// `min_expected` are merged into one bin; if that bin is still below the
/// threshold it is merged with the smallest remaining cell. df = bins - 1.
ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                double min_expected = 5.0);

}  // namespace bbs
