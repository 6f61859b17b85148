#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "bbs/errors.hpp"
#include "bbs/pitman.hpp"
#include "bbs/simplex.hpp"

using namespace bbs;

namespace {

ScalarPath path(std::int64_t lo, std::vector<double> v, Tail left, Tail right) {
  ScalarPath p;
  p.lo = lo;
  p.values = std::move(v);
  p.left = left;
  p.right = right;
  return p;
}

ScalarPath abs_path(std::int64_t r) {
  std::vector<double> v;
  for (std::int64_t n = -r; n <= r; ++n) v.push_back(static_cast<double>(std::abs(n)));
  return path(-r, v, Tail::with_slope(-1), Tail::with_slope(1));
}

// Random walk with steps in {-1, 0, +1} on [lo, hi], pi(0) = 0.
ScalarPath random_walk(std::mt19937_64& g, std::int64_t lo, std::int64_t hi, double left, double right) {
  std::vector<double> v(static_cast<std::size_t>(hi - lo + 1));
  const auto zero = static_cast<std::size_t>(-lo);
  for (std::size_t k = zero + 1; k < v.size(); ++k) v[k] = v[k - 1] + static_cast<double>(g() % 3) - 1;
  for (std::size_t k = zero; k-- > 0;) v[k] = v[k + 1] - (static_cast<double>(g() % 3) - 1);
  return path(lo, v, Tail::with_slope(left), Tail::with_slope(right));
}

std::vector<double> padded(const ScalarPath& p, std::int64_t pad) {
  std::vector<double> v;
  for (std::int64_t n = p.lo - pad; n <= p.hi() + pad; ++n) v.push_back(p.at(n));
  return v;
}

}  // namespace

TEST_CASE("one-sided transform") {
  const auto out = pitman_one_sided(path(0, {0, -1, 0, -1, -2, -1}, Tail::open(), Tail::open()));
  CHECK(out.values == std::vector<double>{0, 1, 2, 1, 2, 3});
  const auto up = pitman_one_sided(path(0, {0, 1, 2, 3}, Tail::open(), Tail::open()));
  CHECK(up.values == std::vector<double>{0, 1, 2, 3});
  CHECK_THROWS_AS(pitman_one_sided(path(-1, {0, 0}, Tail::open(), Tail::open())), InvalidArgument);
}

TEST_CASE("one-sided output minus input is -2 running min") {
  std::mt19937_64 g(1);
  for (int rep = 0; rep < 100; ++rep) {
    auto p = random_walk(g, 0, 40, 0, 0);
    const auto out = pitman_one_sided(p);
    double m = 0;
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      m = std::min(m, p.values[k]);
      CHECK(out.values[k] - p.values[k] == -2 * m);
    }
  }
}

TEST_CASE("two-sided transform of |n| is n") {
  // inf_{m<=n} |m| is 0 for n >= 0 and |n| for n < 0.
  const auto out = pitman_two_sided(abs_path(5));
  for (std::int64_t n = -9; n <= 9; ++n) CHECK(out.at(n) == static_cast<double>(n));
}

TEST_CASE("two-sided transform of the flat path") {
  const auto out = pitman_two_sided(path(-3, {0, 0, 0, 0, 0, 0, 0}, Tail::with_slope(0), Tail::with_slope(0)));
  for (double x : out.values) CHECK(x == 0.0);
}

TEST_CASE("two-sided transform, hand example") {
  const auto out = pitman_two_sided(path(-2, {0, -1, 0, -2, 0}, Tail::with_slope(-1), Tail::with_slope(1)));
  CHECK(out.at(1) == 0.0);
  CHECK(out.at(2) == 2.0);
}

TEST_CASE("inverse transform of |n| is -n") {
  const auto out = pitman_inverse(abs_path(4));
  for (std::int64_t n = -8; n <= 8; ++n) CHECK(out.at(n) == static_cast<double>(-n));
  const auto flat = pitman_inverse(path(-1, {0, 0, 0}, Tail::with_slope(0), Tail::with_slope(0)));
  for (double x : flat.values) CHECK(x == 0.0);
}

TEST_CASE("two-sided transform agrees with the definition") {
  std::mt19937_64 g(2);
  for (int rep = 0; rep < 300; ++rep) {
    const double right = rep % 2 ? 1.0 : -1.0;
    const auto p = random_walk(g, -15, 15, -1, right);
    const auto out = pitman_two_sided(p);
    const std::int64_t pad = 200;
    const auto ref = oracle::pitman(padded(p, pad), p.lo - pad);
    for (std::int64_t n = p.lo - 20; n <= p.hi() + 20; ++n)
      REQUIRE(out.at(n) == ref[static_cast<std::size_t>(n - p.lo + pad)]);
  }
}

TEST_CASE("inverse transform agrees with the definition") {
  std::mt19937_64 g(3);
  for (int rep = 0; rep < 300; ++rep) {
    const double left = rep % 2 ? 1.0 : -1.0;
    const auto p = random_walk(g, -15, 15, left, 1);
    const auto out = pitman_inverse(p);
    const std::int64_t pad = 200;
    const auto ref = oracle::pitman_inverse(padded(p, pad), p.lo - pad);
    for (std::int64_t n = p.lo - 20; n <= p.hi() + 20; ++n)
      REQUIRE(out.at(n) == ref[static_cast<std::size_t>(n - p.lo + pad)]);
  }
}

TEST_CASE("undecidable and infinite tails") {
  const auto open = path(-1, {1, 0, 1}, Tail::open(), Tail::open());
  CHECK_THROWS_AS(pitman_two_sided(open), UndecidableError);
  CHECK_THROWS_AS(pitman_two_sided(path(-1, {1, 0, 1}, Tail::with_slope(1), Tail::open())), DomainError);
  CHECK(in_domain(open, PitmanDomain::R_P1) == Decision::Undecidable);
  auto known = open;
  known.left = Tail::open(-3.0);
  CHECK(pitman_two_sided(known).at(0) == doctest::Approx(0 + 2 * 3.0 - 2 * 3.0));
}

TEST_CASE("domain decisions") {
  CHECK(in_domain(abs_path(3), PitmanDomain::R_P1) == Decision::Yes);
  CHECK(in_domain(abs_path(3), PitmanDomain::R_P1invP1) == Decision::No);
  // -A of an empty FiniteSupport configuration: n -> -n.
  const auto down = path(-2, {2, 1, 0, -1, -2}, Tail::with_slope(-1), Tail::with_slope(-1));
  CHECK(in_domain(down, PitmanDomain::R_P1invP1) == Decision::Yes);
  const auto jump = path(-2, {2, 1, 0, -2, -3}, Tail::with_slope(-1), Tail::with_slope(-1));
  CHECK(in_domain(jump, PitmanDomain::R_P1invP1) == Decision::No);
  CHECK(in_domain(jump, PitmanDomain::R_P1invP1, 2.0) == Decision::No);
}

TEST_CASE("round trip on the domain, failure off it") {
  std::mt19937_64 g(4);
  int checked = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const auto p = random_walk(g, -20, 20, -1, -1);
    REQUIRE(in_domain(p, PitmanDomain::R_P1invP1) == Decision::Yes);
    const auto back = pitman_inverse(pitman_two_sided(p));
    for (std::int64_t n = p.lo - 10; n <= p.hi() + 10; ++n) REQUIRE(back.at(n) == p.at(n));
    const auto q = random_walk(g, -20, 20, 1, 1);
    REQUIRE(in_domain(q, PitmanDomain::R_P1P1inv) == Decision::Yes);
    const auto fwd = pitman_two_sided(pitman_inverse(q));
    for (std::int64_t n = q.lo - 10; n <= q.hi() + 10; ++n) REQUIRE(fwd.at(n) == q.at(n));
    ++checked;
  }
  CHECK(checked == 500);
  // |n| misses the recurrence condition: P|n| = n and P^{-1} n = -n.
  const auto bad = pitman_inverse(pitman_two_sided(abs_path(3)));
  CHECK(bad.at(2) == -2.0);
}

TEST_CASE("pitman_alpha: orthogonal part untouched") {
  const double a[2] = {1.0, 1.0};
  VectorPath perp;
  perp.lo = -2;
  for (int k = -2; k <= 2; ++k) perp.values.push_back({static_cast<double>(k), -static_cast<double>(k)});
  perp.left = VectorTail::with_step({1, -1});
  perp.right = VectorTail::with_step({1, -1});
  const auto out = pitman_alpha(perp, a, PitmanDirection::Forward);
  for (std::int64_t n = -2; n <= 2; ++n) CHECK(out.at(n) == perp.at(n));

  std::mt19937_64 g(9);
  VectorPath v;
  v.lo = -10;
  v.values.assign(21, Vec{0, 0});
  for (std::size_t k = 11; k < 21; ++k) v.values[k] = {v.values[k - 1][0] + double(g() % 3) - 1, v.values[k - 1][1] + double(g() % 3) - 1};
  for (std::size_t k = 10; k-- > 0;) v.values[k] = {v.values[k + 1][0] + 1, v.values[k + 1][1] + double(g() % 3) - 1};
  v.left = VectorTail::with_step({-1, 0});
  v.right = VectorTail::with_step({1, 0});
  const auto pv = pitman_alpha(v, a, PitmanDirection::Forward);
  const auto ps = pitman_two_sided(project(v, a));
  const auto s = project(v, a);
  for (std::int64_t n = -10; n <= 10; ++n) {
    const Vec x = v.at(n), y = pv.at(n);
    for (std::size_t d = 0; d < 2; ++d)
      CHECK(y[d] == doctest::Approx(ps.at(n) * a[d] + (x[d] - s.at(n) * a[d])).epsilon(1e-12));
  }
}

TEST_CASE("tau swaps e_j and e_k") {
  const auto b = build_simplex_basis(3);
  const Vec t = tau(b[0], b, 0, 2);
  for (std::size_t d = 0; d < 3; ++d) CHECK(t[d] == doctest::Approx(b[2][d]).epsilon(1e-12));
  const Vec u = tau(b[1], b, 0, 2);
  for (std::size_t d = 0; d < 3; ++d) CHECK(u[d] == doctest::Approx(b[1][d]).epsilon(1e-12));
}
