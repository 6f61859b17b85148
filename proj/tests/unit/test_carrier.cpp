#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "bbs/carrier.hpp"
#include "bbs/errors.hpp"
#include "bbs/lattice.hpp"

using namespace bbs;

namespace {

Configuration fs(int kappa, std::int64_t offset, std::vector<int> cells) {
  return Configuration{kappa, offset, std::move(cells), Boundary::FiniteSupport};
}

}  // namespace

TEST_CASE("carrier recurrence") {
  const auto c = fs(2, 1, {1, 2, 0, 0, 1, 0});
  CHECK(run_carrier(c, 1).loads == std::vector<std::int64_t>{1, 1, 0, 0, 1, 0});
  CHECK(carrier_from_heights(encode(c), 1).loads == std::vector<std::int64_t>{1, 1, 0, 0, 1, 0});
  CHECK(run_carrier(fs(1, 0, {0, 0, 0}), 1).loads == std::vector<std::int64_t>{0, 0, 0});
  CHECK(run_carrier(fs(1, 0, {1, 1, 1}), 1).loads == std::vector<std::int64_t>{1, 2, 3});
  CHECK(run_carrier(fs(1, 0, {1, 1, 1}), 1).max_load() == 3);
}

TEST_CASE("carrier equals sup A - A on every length-8 word, kappa <= 3") {
  for (int kappa = 1; kappa <= 3; ++kappa) {
    const int base = kappa + 1;
    const int len = kappa == 3 ? 6 : 8;
    int total = 1;
    for (int k = 0; k < len; ++k) total *= base;
    for (int code = 0; code < total; ++code) {
      std::vector<int> cells(static_cast<std::size_t>(len));
      int x = code;
      for (auto& c : cells) {
        c = x % base;
        x /= base;
      }
      const auto conf = fs(kappa, -3, cells);
      const auto path = encode(conf);
      for (int i = 1; i <= kappa; ++i) REQUIRE(run_carrier(conf, i).loads == carrier_from_heights(path, i).loads);
    }
  }
}

TEST_CASE("carrier rule against ball-by-ball moves") {
  const auto c = fs(2, 1, {1, 2, 0, 0, 1, 0});
  CHECK(trimmed(apply_Ti_direct(c, 1)).cells == std::vector<int>{2, 1, 0, 0, 1});
  CHECK(same_state(apply_Ti_direct(c, 1), fs(2, 1, {0, 2, 1, 0, 0, 1})));
  CHECK(same_state(apply_Ti_direct(fs(3, 0, {0, 0}), 2), fs(3, 0, {})));

  std::mt19937_64 g(8);
  for (int rep = 0; rep < 2000; ++rep) {
    const int kappa = 1 + static_cast<int>(g() % 3);
    std::vector<int> cells(g() % 20);
    for (auto& x : cells) x = static_cast<int>(g() % (kappa + 1));
    const int i = 1 + static_cast<int>(g() % kappa);
    const auto got = apply_Ti_direct(fs(kappa, 2, cells), i);
    REQUIRE(same_state(got, fs(kappa, 2, oracle::bbs_step(cells, i))));
  }
}

TEST_CASE("three-colour example, T_1") {
  const auto eta = fs(3, 1, cells_from_string("012031320301123000000000"));
  CHECK(cells_to_string(rewindow(apply_Ti_direct(eta, 1), 1, 24).cells) == "002130321300023110000000");
}

TEST_CASE("inverse carrier rule") {
  const auto c = fs(2, 1, {0, 2, 1, 0, 0, 1});
  CHECK(same_state(apply_Ti_inverse_direct(c, 1), fs(2, 1, {1, 2, 0, 0, 1, 0})));
  std::mt19937_64 g(12);
  for (int rep = 0; rep < 2000; ++rep) {
    std::vector<int> cells(g() % 16);
    for (auto& x : cells) x = static_cast<int>(g() % 3);
    std::size_t pre = 0;
    const auto want = oracle::bbs_step_left(cells, 2, pre);
    const auto got = apply_Ti_inverse_direct(fs(2, 0, cells), 2);
    REQUIRE(same_state(got, fs(2, -static_cast<std::int64_t>(pre), want)));
  }
}

TEST_CASE("windowed carrier needs an edge load") {
  Configuration w{1, 0, {1, 0, 0}, Boundary::Windowed};
  CHECK_THROWS_AS(run_carrier(w, 1), UndecidableError);
  CHECK(run_carrier(w, 1, 2).loads == std::vector<std::int64_t>{3, 2, 1});
  const auto t = apply_Ti_direct(w, 1, 2);
  CHECK(t.cells == std::vector<int>{0, 1, 1});
  CHECK(mirror(mirror(w)) == w);
}
