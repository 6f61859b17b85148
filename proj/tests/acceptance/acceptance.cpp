// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bbs/carrier.hpp"
#include "bbs/classify.hpp"
#include "bbs/continuum.hpp"
#include "bbs/dynamics.hpp"
#include "bbs/lattice.hpp"
#include "bbs/pitman.hpp"
#include "bbs/random.hpp"
#include "bbs/simplex.hpp"
#include "bbs/stats.hpp"
#include "oracles.hpp"

using namespace bbs;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Configuration fs(int kappa, std::int64_t offset, std::vector<int> cells) {
  return Configuration{kappa, offset, std::move(cells), Boundary::FiniteSupport};
}

// Every FiniteSupport window of length 1..max_len over {0..kappa}, placed at -len/2.
void for_each_window(int kappa, int max_len, const std::function<void(const Configuration&)>& f) {
  const int base = kappa + 1;
  for (int len = 1; len <= max_len; ++len) {
    long total = 1;
    for (int k = 0; k < len; ++k) total *= base;
    for (long code = 0; code < total; ++code) {
      std::vector<int> cells(static_cast<std::size_t>(len));
      long x = code;
      for (auto& c : cells) {
        c = static_cast<int>(x % base);
        x /= base;
      }
      f(fs(kappa, -len / 2, std::move(cells)));
    }
  }
}

std::string shown(const PathEncoding& p, std::int64_t lo, std::int64_t hi) {
  return cells_to_string(rewindow(decode(p), lo, hi).cells);
}

Outcome golden() {
  const auto t0 = Clock::now();
  Outcome o;
  const char* solitons[] = {"011100000010000000000", "000011100001000000000", "000000011100100000000",
                            "000000000011011000000", "000000000000100111000"};
  PathEncoding p = encode(fs(1, 1, cells_from_string(solitons[0])));
  for (int t = 1; t <= 4; ++t) {
    p = apply_word(p, full_update(1));
    if (shown(p, 1, 21) != solitons[t]) o.pass = false;
  }
  const auto eta = encode(fs(3, 1, cells_from_string("012031320301123000000000")));
  const auto t1 = apply_Ti(eta, 1);
  const auto t21 = apply_Ti(t1, 2);
  const auto t = apply_Ti(t21, 3);
  const auto tt = apply_word(t, full_update(3));
  if (shown(t1, 1, 24) != "002130321300023110000000") o.pass = false;
  if (shown(t21, 1, 24) != "000132301320003112000000") o.pass = false;
  if (shown(t, 1, 24) != "000102031023300112300000") o.pass = false;
  if (shown(tt, 1, 24) != "000010203100023300011230") o.pass = false;
  const double secs = seconds_since(t0);
  if (secs >= 1.0) o.pass = false;
  o.detail = "9 strings, " + fmt("%.3f s", secs);
  return o;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  long cases = 0, mismatches = 0;
  auto check = [&](const Configuration& c) {
    const auto p = encode(c);
    for (int i = 1; i <= c.kappa; ++i) {
      ++cases;
      if (!same_state(decode(apply_Ti(p, i)), apply_Ti_direct(c, i))) ++mismatches;
    }
  };
  for_each_window(2, 8, check);
  for_each_window(3, 6, check);
  const double secs = seconds_since(t0);
  Outcome o{mismatches == 0 && secs < 10.0, ""};
  o.detail = std::to_string(cases) + " (window, colour) cases, " + std::to_string(mismatches) +
             " mismatches, " + fmt("%.2f s", secs);
  return o;
}

ScalarPath walk(std::mt19937_64& g, std::int64_t lo, std::int64_t hi, double left, double right) {
  ScalarPath p;
  p.lo = lo;
  double x = 0;
  std::vector<double> up, down;
  for (std::int64_t n = 1; n <= hi; ++n) up.push_back(x += static_cast<double>(static_cast<int>(g() % 3) - 1));
  x = 0;
  for (std::int64_t n = -1; n >= lo; --n) down.push_back(x += static_cast<double>(static_cast<int>(g() % 3) - 1));
  p.values.assign(down.rbegin(), down.rend());
  p.values.push_back(0);
  p.values.insert(p.values.end(), up.begin(), up.end());
  p.left = Tail::with_slope(left);
  p.right = Tail::with_slope(right);
  return p;
}

bool same_on(const ScalarPath& a, const ScalarPath& b, std::int64_t lo, std::int64_t hi) {
  for (std::int64_t n = lo; n <= hi; ++n)
    if (a.at(n) != b.at(n)) return false;
  return true;
}

Outcome inversion() {
  long lattice = 0, lattice_bad = 0;
  auto check = [&](const Configuration& c) {
    const auto p = encode(c);
    for (int i = 1; i <= c.kappa; ++i) {
      lattice += 2;
      if (!same_state(decode(apply_Ti_inverse(apply_Ti(p, i), i)), c)) ++lattice_bad;
      if (!same_state(decode(apply_Ti(apply_Ti_inverse(p, i), i)), c)) ++lattice_bad;
    }
  };
  for_each_window(2, 8, check);
  for_each_window(3, 6, check);
  std::mt19937_64 g(20260301);
  for (int rep = 0; rep < 100000; ++rep) {
    std::vector<int> cells(200);
    for (auto& x : cells) x = static_cast<int>(g() % 4);
    check(fs(3, -100, std::move(cells)));
  }

  long scalar = 0, scalar_bad = 0, off_domain = 0;
  for (int rep = 0; rep < 100000; ++rep) {
    const std::int64_t lo = -static_cast<std::int64_t>(g() % 40), hi = static_cast<std::int64_t>(g() % 40);
    const auto p = walk(g, lo, hi, -1, -1);
    const auto q = walk(g, lo, hi, 1, 1);
    if (in_domain(p, PitmanDomain::R_P1invP1) != Decision::Yes) ++off_domain;
    if (in_domain(q, PitmanDomain::R_P1P1inv) != Decision::Yes) ++off_domain;
    scalar += 2;
    if (!same_on(pitman_inverse(pitman_two_sided(p)), p, lo - 10, hi + 10)) ++scalar_bad;
    if (!same_on(pitman_two_sided(pitman_inverse(q)), q, lo - 10, hi + 10)) ++scalar_bad;
  }

  // |n| has a rising right tail: the running infimum never recurs.
  ScalarPath abs_n;
  abs_n.lo = -5;
  for (int n = -5; n <= 5; ++n) abs_n.values.push_back(std::abs(n));
  abs_n.left = Tail::with_slope(-1);
  abs_n.right = Tail::with_slope(1);
  const auto back = pitman_inverse(pitman_two_sided(abs_n));
  const bool counter_fails =
      in_domain(abs_n, PitmanDomain::R_P1invP1) == Decision::No && !same_on(back, abs_n, -5, 5);

  Outcome o{lattice_bad == 0 && scalar_bad == 0 && off_domain == 0 && counter_fails, ""};
  o.detail = std::to_string(lattice) + " lattice round trips (" + std::to_string(lattice_bad) + " bad), " +
             std::to_string(scalar) + " scalar (" + std::to_string(scalar_bad) + " bad, " +
             std::to_string(off_domain) + " off domain), |n| round trip " +
             (counter_fails ? "fails as required" : "DID NOT FAIL");
  return o;
}

Configuration random_config(std::mt19937_64& g, int kappa, std::size_t len) {
  std::vector<int> cells(len);
  for (auto& x : cells) x = static_cast<int>(g() % static_cast<unsigned>(kappa + 1));
  return fs(kappa, -static_cast<std::int64_t>(len / 2), std::move(cells));
}

Outcome height_identities() {
  std::mt19937_64 g(4242);
  constexpr int kReps = 10000;
  long bad_w = 0, bad_two = 0, bad_one = 0, bad_cross = 0, bad_tau = 0, bad_fg = 0;

  for (int rep = 0; rep < kReps; ++rep) {
    const int kappa = 1 + static_cast<int>(g() % 3);
    const auto c = random_config(g, kappa, 1 + g() % 60);
    const int i = 1 + static_cast<int>(g() % static_cast<unsigned>(kappa));
    const auto p = encode(c);

    // W = sup A - A, carrier empty far left.
    const auto trace = run_carrier(c, i);
    std::int64_t sup = height(p, i, p.first_index());
    for (std::int64_t n = p.first_index(); n < c.first(); ++n) sup = std::max(sup, height(p, i, n));
    for (std::size_t k = 0; k < trace.loads.size(); ++k) {
      const std::int64_t n = c.first() + static_cast<std::int64_t>(k);
      sup = std::max(sup, height(p, i, n));
      if (trace.loads[k] != sup - height(p, i, n)) {
        ++bad_w;
        break;
      }
    }

    // A_i T_i S = 2 sup A - A - 2 M_0, two-sided and anchored at 0.
    const auto q = apply_Ti(p, i);
    const std::int64_t lo = std::min(p.first_index(), q.first_index()) - 5;
    const std::int64_t hi = std::max(p.last_index(), q.last_index()) + 5;
    std::int64_t m0 = height(p, i, lo);
    for (std::int64_t n = lo; n <= 0; ++n) m0 = std::max(m0, height(p, i, n));
    sup = height(p, i, lo);
    for (std::int64_t n = lo; n <= hi; ++n) {
      sup = std::max(sup, height(p, i, n));
      if (height(q, i, n) != 2 * sup - height(p, i, n) - 2 * m0) {
        ++bad_two;
        break;
      }
    }

    // One-sided form on Z_+: 2 sup_{0<=m<=n} A - A.
    ScalarPath neg;
    neg.lo = 0;
    for (std::int64_t n = 0; n <= hi; ++n) neg.values.push_back(-static_cast<double>(height(p, i, n)));
    const auto one = pitman_one_sided(neg);
    std::int64_t run = 0;
    for (std::int64_t n = 0; n <= hi; ++n) {
      run = std::max(run, height(p, i, n));
      if (one.at(n) != static_cast<double>(2 * run - height(p, i, n))) {
        ++bad_one;
        break;
      }
    }

    // A_j T_i S = A_j S + W - M_0 and its 2 A_j T_i S = 2 A_j S + A_i T_i S - A_i S form.
    if (kappa >= 2) {
      int j = 1 + static_cast<int>(g() % static_cast<unsigned>(kappa - 1));
      if (j >= i) ++j;
      if (cross_height_check(p, i, j) != 0) ++bad_cross;
    }

    // T_2 T_1 = tau_(0,1) tau_(1,2) P_{e_2-e_1} P_{e_1-e_0}; for kappa = 3 the full T as well.
    if (kappa >= 2) {
      const auto b = build_simplex_basis(kappa);
      const int letters = (kappa == 3 && rep % 2) ? 3 : 2;
      auto s = to_vector_path(p, b);
      Word w;
      for (int k = 1; k <= letters; ++k) {
        Vec alpha = b[static_cast<std::size_t>(k)];
        const Vec& prev = b[static_cast<std::size_t>(k - 1)];
        for (std::size_t d = 0; d < alpha.size(); ++d) alpha[d] -= prev[d];
        s = pitman_alpha(s, alpha, PitmanDirection::Forward);
        w.push_back(Letter{k, false});
      }
      const auto target = apply_word(p, w);
      for (std::int64_t n = target.first_index(); n <= target.last_index(); ++n) {
        Vec v = s.at(n);
        for (int k = letters - 1; k >= 0; --k) v = tau(v, b, k, k + 1);
        const Vec want = path_point(target, b, n);
        bool ok = true;
        for (std::size_t d = 0; d < v.size(); ++d) ok = ok && std::abs(v[d] - want[d]) < 1e-9;
        if (!ok) {
          ++bad_tau;
          break;
        }
      }
    }

    // f/g: symbols outside {0, i} stay; the {0, i} subsequence moves as one colour.
    const Configuration out = apply_Ti_direct(c, i);
    const Configuration in = rewindow(c, std::min(out.first(), c.first()), std::max(out.last(), c.last()));
    const Configuration outw = rewindow(out, in.first(), in.last());
    std::vector<int> g_in, g_out;
    bool ok = true;
    for (std::size_t k = 0; k < in.cells.size(); ++k) {
      const bool zi_in = in.cells[k] == 0 || in.cells[k] == i;
      const bool zi_out = outw.cells[k] == 0 || outw.cells[k] == i;
      if (zi_in != zi_out || (!zi_in && in.cells[k] != outw.cells[k])) ok = false;
      if (zi_in) g_in.push_back(in.cells[k] == i);
      if (zi_out) g_out.push_back(outw.cells[k] == i);
    }
    if (ok) {
      auto want = oracle::bbs_step(g_in, 1);
      want.resize(std::max(want.size(), g_out.size()), 0);
      g_out.resize(want.size(), 0);
      ok = want == g_out;
    }
    if (!ok) ++bad_fg;
  }

  Outcome o{bad_w + bad_two + bad_one + bad_cross + bad_tau + bad_fg == 0, ""};
  o.detail = std::to_string(kReps) + " instances; failures W " + std::to_string(bad_w) + ", 2sup-A " +
             std::to_string(bad_two) + ", one-sided " + std::to_string(bad_one) + ", A_jT_i " +
             std::to_string(bad_cross) + ", tau " + std::to_string(bad_tau) + ", f/g " + std::to_string(bad_fg);
  return o;
}

Outcome simplex_identities() {
  std::mt19937_64 g(55);
  std::normal_distribution<double> N;
  double worst = 0;
  for (int kappa : {1, 2, 3, 5, 10}) {
    const auto b = build_simplex_basis(kappa);
    for (int i = 0; i <= kappa; ++i)
      for (int j = 0; j <= kappa; ++j) {
        const double want = i == j ? 1.0 : -1.0 / kappa;
        worst = std::max(worst, std::abs(dot(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]) - want));
      }
    for (std::size_t d = 0; d < static_cast<std::size_t>(kappa); ++d) {
      double s = 0;
      for (int i = 0; i <= kappa; ++i) s += b[static_cast<std::size_t>(i)][d];
      worst = std::max(worst, std::abs(s));
    }
    for (int rep = 0; rep < 1000; ++rep) {
      Vec u(static_cast<std::size_t>(kappa)), v(u.size());
      for (auto& x : u) x = N(g);
      for (auto& x : v) x = N(g);
      const double nu = std::sqrt(norm2(u));
      for (auto& x : u) x /= nu;
      const double proj = dot(u, v);
      for (std::size_t d = 0; d < v.size(); ++d) v[d] -= proj * u[d];
      const double nv = std::sqrt(norm2(v));
      double sq = 0, cross = 0;
      for (int i = 0; i <= kappa; ++i) {
        const double eu = dot(b[static_cast<std::size_t>(i)], u);
        sq += eu * eu;
        if (nv > 1e-9) cross += eu * dot(b[static_cast<std::size_t>(i)], v) / nv;
      }
      worst = std::max({worst, std::abs(sq - (kappa + 1.0) / kappa), std::abs(cross)});
    }
  }
  return Outcome{worst < 1e-10, "max deviation " + fmt("%.2e", worst) + " over kappa 1,2,3,5,10"};
}

Outcome iid_invariance() {
  const auto t0 = Clock::now();
  Outcome o;
  int runs = 0, passed = 0;
  double worst_control = 0;
  std::uint64_t seed = 600;
  for (const auto& probs : {std::vector<double>{0.6, 0.4}, std::vector<double>{0.5, 0.3, 0.2}}) {
    const auto law = ColorLaw::from_probs(probs);
    for (int color = 1; color <= law.kappa; ++color)
      for (int w = 1; w <= 3; ++w) {
        InvarianceSettings s;
        s.law = law;
        s.color = color;
        s.sites = 1'000'000;
        s.word_length = w;
        s.trials = 10;
        s.threshold = 1e-3;
        s.required_passes = 9;
        s.seed = ++seed;
        const auto r = invariance_test(s);
        ++runs;
        InvarianceSettings cs = s;
        cs.null_law = swapped_law(law, color);
        const auto cr = invariance_test(cs);
        worst_control = std::max(worst_control, cr.max_p);
        if (r.pass && cr.max_p < 1e-6) ++passed;
      }
  }
  const double secs = seconds_since(t0);
  o.pass = passed == runs && secs < 120.0;
  o.detail = std::to_string(passed) + "/" + std::to_string(runs) + " (law, colour, w) runs with >= 9/10 trials " +
             "p > 0.001; control max p " + fmt("%.1e", worst_control) + ", " + fmt("%.1f s", secs);
  return o;
}

Outcome counterexample_a() {
  constexpr int kEpochs = 50;
  const auto a = example_config("a", kEpochs);
  const auto p = encode(a);
  const auto t2 = apply_Ti(p, 2);
  std::vector<double> ratios;
  for (int m = 1; m <= kEpochs; ++m) {
    const std::int64_t end = 5LL * m * m + 4LL * m;
    const auto r = subcriticality_ratio(t2, 1, end, end);
    ratios.push_back(r.at(0).ratio.value_or(1.0));
  }
  int below_late = 0;
  for (int m = kEpochs / 2; m < kEpochs; ++m) below_late += ratios[static_cast<std::size_t>(m)] < 0.6;
  const std::int64_t horizon = static_cast<std::int64_t>(a.cells.size()) - 1;
  double pre = 1;
  for (int color : {1, 2}) {
    const auto r = subcriticality_ratio(p, color, horizon, horizon);
    pre = std::min(pre, r.at(0).ratio.value_or(0.0));
  }
  const double last = ratios.back();
  Outcome o;
  o.pass = below_late == kEpochs - kEpochs / 2 && std::abs(last - 0.5) < 0.05 && pre > 0.9;
  o.detail = "ratio < 0.6 at " + std::to_string(below_late) + "/" + std::to_string(kEpochs - kEpochs / 2) +
             " late epoch ends, epoch 10 " + fmt("%.4f", ratios[9]) + ", epoch 50 " + fmt("%.4f", last) +
             ", pre-T_2 min ratio " + fmt("%.4f", pre);
  return o;
}

Outcome donsker() {
  const auto t0 = Clock::now();
  constexpr std::int64_t n = 10000;
  constexpr int samples = 10000;
  const auto b1 = build_simplex_basis(1);
  const std::vector<double> c1{0.5, -0.5};
  std::vector<double> x(samples);
  parallel_for(samples, 0, [&](std::size_t k) {
    x[k] = donsker_value(b1, c1, n, 1.0, derive_seed(801, k))[0];
  });
  const auto ks = ks_one_sample(x, [](double v) { return normal_cdf(v, 1.0, 1.0); });

  const auto b2 = build_simplex_basis(2);
  const std::vector<double> c2{2, -1, -1};
  std::vector<double> u(samples), v(samples);
  parallel_for(samples, 0, [&](std::size_t k) {
    const Vec y = donsker_value(b2, c2, n, 1.0, derive_seed(802, k));
    u[k] = y[0];
    v[k] = y[1];
  });
  const double cov = covariance(u, v);
  const double secs = seconds_since(t0);
  Outcome o{ks.distance < 0.02 && std::abs(cov) < 0.05 && secs < 300.0, ""};
  o.detail = "KS " + fmt("%.4f", ks.distance) + ", cov " + fmt("%.4f", cov) + ", " + fmt("%.1f s", secs);
  return o;
}

Outcome bm_invariance() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 900;
  for (const auto& spec : {DriftSpec{1, {1.0, -1.0}}, DriftSpec{2, {2.0, -1.0, -1.0}}}) {
    BmSettings s;
    s.spec = spec;
    s.L = 50;
    s.h = 0.01;
    s.Lprime = 25;
    s.Lsecond = 12.5;
    s.seeds = 5000;
    s.seed = ++seed;
    s.threshold = 0.035;
    s.control_scale = 2.0;
    s.control_threshold = 0.1;
    const auto r = bm_invariance_test(s);
    ok = ok && r.pass && r.control_rejects;
    detail += "kappa " + std::to_string(spec.kappa) + ": max KS " + fmt("%.4f", r.max_ks) + ", control " +
              fmt("%.4f", r.control_max_ks) + "; ";
  }
  const double secs = seconds_since(t0);
  return Outcome{ok && secs < 600.0, detail + fmt("%.1f s", secs)};
}

Outcome scaling() {
  std::mt19937_64 g(1010);
  double worst = 0;
  int paths = 0;
  struct Case {
    double a, b;
    int refine;
  };
  for (const Case cs : {Case{2, 1, 1}, Case{1, 2, 1}, Case{3, 0.5, 2}}) {
    for (int rep = 0; rep < 1000; ++rep) {
      const int kappa = 1 + static_cast<int>(g() % 3);
      const auto basis = build_simplex_basis(kappa);
      std::vector<double> c(static_cast<std::size_t>(kappa) + 1, -1.0);
      c[0] = kappa;
      const auto s = sample_brownian_with_drift(DriftSpec{kappa, c}, basis, 2.0, 0.01, g());
      const int color = 1 + static_cast<int>(g() % static_cast<unsigned>(kappa));
      worst = std::max(worst, scaling_equivariance_check(s, basis, color, cs.a, cs.b, cs.refine));
      ++paths;
    }
  }
  return Outcome{worst < 1e-10, std::to_string(paths) + " paths, max deviation " + fmt("%.2e", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"golden evolutions", golden},
      {"Pitman route equals carrier route", oracle_equivalence},
      {"inversion", inversion},
      {"height identities", height_identities},
      {"simplex identities", simplex_identities},
      {"i.i.d. invariance", iid_invariance},
      {"counterexample (a)", counterexample_a},
      {"Donsker limit", donsker},
      {"Brownian invariance", bm_invariance},
      {"scaling equivariance", scaling},
  };
  int failed = 0;
  int k = 0;
  for (const auto& c : criteria) {
    ++k;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", k - failed, k);
  return failed == 0 ? 0 : 1;
}
