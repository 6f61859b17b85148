#include <doctest.h>

#include <cmath>
#include <random>

#include "bbs/rng.hpp"
#include "bbs/stats.hpp"

using namespace bbs;

TEST_CASE("moments") {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8};
  CHECK(mean(x) == 2.5);
  CHECK(variance(x) == doctest::Approx(5.0 / 3));
  CHECK(covariance(x, y) == doctest::Approx(10.0 / 3));
  CHECK(normal_cdf(0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(3, 1, 2) == doctest::Approx(normal_cdf(1)));
}

TEST_CASE("chi-square survival function") {
  // With two degrees of freedom the survival function is exp(-x/2).
  for (double x : {0.1, 1.0, 5.0, 20.0}) CHECK(chi_square_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("Kolmogorov distribution") {
  auto series = [](double l) {
    double s = 0;
    for (int k = 1; k < 200; ++k) s += 2 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * l * l);
    return s;
  };
  for (double l : {0.6, 0.8, 1.0, 1.36, 2.0}) CHECK(kolmogorov_sf(l) == doctest::Approx(series(l)).epsilon(1e-10));
  CHECK(kolmogorov_sf(0.2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-9));
}

TEST_CASE("KS tests") {
  Rng r = make_rng(3);
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& x : a) x = standard_normal(r);
  for (auto& x : b) x = standard_normal(r);
  for (auto& x : c) x = standard_normal(r) + 0.3;
  const auto one = ks_one_sample(a, [](double x) { return normal_cdf(x); });
  CHECK(one.distance < 0.03);
  CHECK(one.p_value > 0.001);
  CHECK(ks_two_sample(a, b).p_value > 0.001);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
  CHECK(ks_two_sample({0, 1, 2}, {10, 11, 12}).distance == 1.0);
}

TEST_CASE("chi-square goodness of fit with pooling") {
  const std::vector<double> obs{10, 20, 30, 1, 1}, exp{12, 18, 30, 1, 1};
  const auto r = chi_square_test(obs, exp);
  // The pooled cells hold too little mass and join the smallest bin.
  CHECK(r.pooled == 2);
  CHECK(r.bins == 3);
  CHECK(r.df == 2);
  const double want = 4.0 / 14 + 4.0 / 18;
  CHECK(r.statistic == doctest::Approx(want));
}

TEST_CASE("rng streams") {
  Rng a = make_rng(1, 0), b = make_rng(1, 0), c = make_rng(1, 1);
  CHECK(a() == b());
  CHECK(make_rng(1, 0)() != c());
  double s = 0;
  Rng u = make_rng(2);
  for (int k = 0; k < 100000; ++k) {
    const double x = uniform01(u);
    REQUIRE(x >= 0);
    REQUIRE(x < 1);
    s += x;
  }
  CHECK(std::abs(s / 1e5 - 0.5) < 0.005);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t k) { hits[k]++; });
  for (int h : hits) CHECK(h == 1);
}
