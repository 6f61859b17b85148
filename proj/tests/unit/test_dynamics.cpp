#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "bbs/carrier.hpp"
#include "bbs/dynamics.hpp"
#include "bbs/errors.hpp"
#include "bbs/simplex.hpp"

using namespace bbs;

namespace {

Configuration fs(int kappa, std::int64_t offset, std::vector<int> cells) {
  return Configuration{kappa, offset, std::move(cells), Boundary::FiniteSupport};
}

Configuration fs(int kappa, const char* cells) { return fs(kappa, 1, cells_from_string(cells)); }

std::string shown(const PathEncoding& p, std::int64_t lo, std::int64_t hi) {
  return cells_to_string(rewindow(decode(p), lo, hi).cells);
}

Configuration random_config(std::mt19937_64& g, int kappa, std::size_t len) {
  std::vector<int> cells(len);
  for (auto& x : cells) x = static_cast<int>(g() % static_cast<unsigned>(kappa + 1));
  return fs(kappa, -static_cast<std::int64_t>(len / 2), cells);
}

}  // namespace

TEST_CASE("one-colour solitons") {
  const char* lines[] = {"011100000010000000000", "000011100001000000000", "000000011100100000000",
                         "000000000011011000000", "000000000000100111000"};
  PathEncoding p = encode(fs(1, lines[0]));
  for (int t = 1; t <= 4; ++t) {
    p = apply_word(p, full_update(1));
    CHECK(shown(p, 1, 21) == lines[t]);
  }
}

TEST_CASE("three-colour example") {
  const auto eta = encode(fs(3, "012031320301123000000000"));
  const auto t1 = apply_Ti(eta, 1);
  CHECK(shown(t1, 1, 24) == "002130321300023110000000");
  const auto t21 = apply_Ti(t1, 2);
  CHECK(shown(t21, 1, 24) == "000132301320003112000000");
  const auto t = apply_Ti(t21, 3);
  CHECK(shown(t, 1, 24) == "000102031023300112300000");
  CHECK(shown(apply_word(eta, parse_word("+1+2+3+1+2+3")), 1, 24) == "000010203100023300011230");
}

TEST_CASE("small example and its inverse") {
  const auto p = encode(fs(2, 1, {1, 2, 0, 0, 1, 0}));
  CHECK(same_state(decode(apply_Ti(p, 1)), fs(2, 1, {0, 2, 1, 0, 0, 1})));
  CHECK(same_state(decode(apply_Ti_inverse(encode(fs(2, 1, {0, 2, 1, 0, 0, 1})), 1)),
                   fs(2, 1, {1, 2, 0, 0, 1, 0})));
  const auto empty = encode(fs(2, 0, {}));
  CHECK(same_state(decode(apply_Ti_inverse(empty, 2)), fs(2, 0, {})));
}

TEST_CASE("words") {
  const Word w = parse_word("+1+2-3");
  REQUIRE(w.size() == 3);
  CHECK(w[2] == Letter{3, true});
  CHECK(parse_word("1 2 3") == full_update(3));
  CHECK(parse_word("1,2,-1") == Word{{1, false}, {2, false}, {1, true}});
  CHECK(parse_word(format_word(w)) == w);
  CHECK_THROWS_AS(parse_word("+x"), ParseError);
  CHECK_THROWS_AS(parse_word("+0"), ParseError);

  std::mt19937_64 g(1);
  for (int rep = 0; rep < 200; ++rep) {
    const auto c = random_config(g, 3, 30);
    for (int i = 1; i <= 3; ++i) {
      Word pair{{i, false}, {i, true}};
      CHECK(same_state(decode(apply_word(encode(c), pair)), c));
      CHECK(same_state(apply_word_direct(c, pair), c));
    }
  }
}

TEST_CASE("a failing letter is named") {
  Configuration w{1, 0, {1, 0}, Boundary::Windowed};
  try {
    apply_word(encode(w), parse_word("+1"));
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("letter 0 (+1)") != std::string::npos);
  }
}

TEST_CASE("Pitman route equals ball-by-ball moves") {
  std::mt19937_64 g(2);
  for (int rep = 0; rep < 3000; ++rep) {
    const int kappa = 1 + static_cast<int>(g() % 4);
    const auto c = random_config(g, kappa, g() % 25);
    const int i = 1 + static_cast<int>(g() % static_cast<unsigned>(kappa));
    const auto want = fs(kappa, c.offset, oracle::bbs_step(c.cells, i));
    REQUIRE(same_state(decode(apply_Ti(encode(c), i)), want));
  }
}

TEST_CASE("a_0 + a_i and the other colours are preserved") {
  std::mt19937_64 g(3);
  for (int rep = 0; rep < 300; ++rep) {
    const auto c = random_config(g, 3, 40);
    const auto p = encode(c);
    const auto q = apply_Ti(p, 2);
    for (std::int64_t n = -30; n <= 60; ++n) {
      REQUIRE(q.count(0, n) + q.count(2, n) == p.count(0, n) + p.count(2, n));
      REQUIRE(q.count(1, n) == p.count(1, n));
      REQUIRE(q.count(3, n) == p.count(3, n));
    }
  }
}

TEST_CASE("A_i T_i S = 2 sup A - A adjusted at zero") {
  std::mt19937_64 g(4);
  for (int rep = 0; rep < 300; ++rep) {
    const auto c = random_config(g, 2, 30);
    const auto p = encode(c);
    const auto q = apply_Ti(p, 1);
    const std::int64_t lo = -40, hi = 60;
    std::int64_t sup = height(p, 1, lo);  // the left tail of A decreases towards -infinity
    for (std::int64_t n = lo; n <= 0; ++n) sup = std::max(sup, height(p, 1, n));
    const std::int64_t m0 = sup;
    sup = height(p, 1, lo);
    for (std::int64_t n = lo; n <= hi; ++n) {
      sup = std::max(sup, height(p, 1, n));
      REQUIRE(height(q, 1, n) == 2 * sup - height(p, 1, n) - 2 * m0);
    }
  }
}

TEST_CASE("cross-colour height identities") {
  std::mt19937_64 g(5);
  CHECK(cross_height_check(encode(fs(3, 0, {})), 1, 2) == 0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto c = random_config(g, 3, 100);
    CHECK(cross_height_check(encode(c), 1, 2) == 0);
    CHECK(cross_height_check(encode(c), 3, 1) == 0);
  }
}

TEST_CASE("T_i = tau P on the simplex path") {
  std::mt19937_64 g(6);
  for (int kappa : {1, 2, 3}) {
    const auto b = build_simplex_basis(kappa);
    for (int rep = 0; rep < 50; ++rep) {
      const auto c = random_config(g, kappa, 20);
      const int i = 1 + static_cast<int>(g() % static_cast<unsigned>(kappa));
      const auto p = encode(c);
      const auto q = apply_Ti(p, i);
      const auto s = to_vector_path(p, b);
      const auto ps = pitman_alpha(s, b.root(i), PitmanDirection::Forward);
      for (std::int64_t n = q.first_index(); n <= q.last_index(); ++n) {
        const Vec want = path_point(q, b, n);
        const Vec got = tau(ps.at(n), b, 0, i);
        for (std::size_t d = 0; d < want.size(); ++d) REQUIRE(std::abs(got[d] - want[d]) < 1e-9);
      }
      const auto back = from_vector_path(s, b, p.first_index(), p.last_index(), Boundary::FiniteSupport);
      CHECK(same_state(decode(back), c));
    }
  }
}

TEST_CASE("windowed T_i with an edge load") {
  Configuration w{1, -1, {1, 0, 0, 1}, Boundary::Windowed};
  const auto p = encode(w);
  CHECK_THROWS_AS(apply_Ti(p, 1), UndecidableError);
  const auto q = decode(apply_Ti(p, 1, 1));
  CHECK(q.cells == apply_Ti_direct(w, 1, 1).cells);
}
