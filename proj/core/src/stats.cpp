#include "bbs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "bbs/errors.hpp"

namespace bbs {

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("stats", "mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) { return covariance(x, x); }

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("stats", "covariance needs two samples of equal size >= 2");
  const double mx = mean(x), my = mean(y);
  double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - mx) * (y[k] - my);
  return s / static_cast<double>(x.size() - 1);
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double chi_square_sf(double x, double df) {
  if (df <= 0) throw InvalidArgument("stats", "chi-square needs df > 0");
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0) return 1.0;
  // Small arguments: the alternating series converges slowly; use the
  // Jacobi-transformed form of the CDF instead.
  if (lambda < 1.0) {
    const double pi = 3.14159265358979323846;
    double cdf = 0;
    for (int k = 1; k <= 50; ++k) {
      const double t = (2 * k - 1) * pi / lambda;
      cdf += std::exp(-t * t / 8.0);
    }
    cdf *= std::sqrt(2 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InvalidArgument("stats", "KS test of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("stats", "KS test of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw InvalidArgument("stats", "observed and expected must have the same nonzero size");
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double pooled_o = 0, pooled_e = 0;
  ChiSquareResult r;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (expected[k] < min_expected) {
      pooled_o += observed[k];
      pooled_e += expected[k];
      ++r.pooled;
    } else {
      bins.emplace_back(observed[k], expected[k]);
    }
  }
  if (r.pooled > 0) {
    if (pooled_e < min_expected && !bins.empty()) {
      auto smallest = std::min_element(bins.begin(), bins.end(),
                                       [](const auto& x, const auto& y) { return x.second < y.second; });
      smallest->first += pooled_o;
      smallest->second += pooled_e;
    } else if (pooled_e > 0) {
      bins.emplace_back(pooled_o, pooled_e);
    } else if (pooled_o > 0) {
      // Observations where the null puts no mass at all.
      r.statistic = std::numeric_limits<double>::infinity();
      r.bins = bins.size() + 1;
      r.df = static_cast<double>(bins.size());
      r.p_value = 0;
      return r;
    }
  }
  for (const auto& [o, e] : bins) r.statistic += (o - e) * (o - e) / e;
  r.bins = bins.size();
  r.df = static_cast<double>(bins.size()) - 1;
  r.p_value = r.df > 0 ? chi_square_sf(r.statistic, r.df) : 1.0;
  return r;
}

}  // namespace bbs
