#include "bbs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbs/carrier.hpp"
#include "bbs/errors.hpp"

namespace bbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_color(int kappa, int color) {
  if (color < 1 || color > kappa) throw InvalidArgument("classify", "colour must be in {1..kappa}");
}

// First index from which a running sup can be started.
std::int64_t sup_start(const PathEncoding& path, std::int64_t lo) {
  if (path.boundary == Boundary::FiniteSupport) return std::min(lo, path.first_index());
  return path.first_index();
}

void check_range(const PathEncoding& path, std::int64_t lo, std::int64_t hi) {
  if (path.boundary == Boundary::Windowed && (!path.has_row(lo) || !path.has_row(hi)))
    throw OutOfWindowError("classify", "range outside a windowed encoding", path.has_row(lo) ? hi : lo);
}

Decision yes_no(bool b) { return b ? Decision::Yes : Decision::No; }

}  // namespace

ClassReport reversibility_report(const PathEncoding& path, int color) {
  check_color(path.kappa, color);
  ClassReport r;
  r.color = color;
  r.boundary = path.boundary;
  r.ratios = subcriticality_ratio(path, color, path.first_index(), path.last_index());

  const std::int64_t lo = std::min<std::int64_t>(path.first_index(), 0);
  const std::int64_t hi = std::max<std::int64_t>(path.last_index(), 0);
  if (path.boundary == Boundary::FiniteSupport) {
    r.exact = true;
    r.M0 = static_cast<double>(sup_height_left_of_zero(path, color));
    std::int64_t i0 = height(path, color, 0);
    for (std::int64_t n = 0; n <= hi; ++n) i0 = std::min(i0, height(path, color, n));
    r.I0 = static_cast<double>(i0);
    // A_i S_n = n + const far out on both sides.
    r.Minf = kInf;
    r.Iminf = -kInf;
    r.max_carrier_load = carrier_from_heights(path, color).max_load();
    r.t_inv_t = r.t_t_inv = r.reversible = Decision::Yes;
    r.subcritical_minus = r.subcritical_plus = Decision::Yes;
    r.critical_minus = r.critical_plus = Decision::No;
    return r;
  }

  r.exact = false;
  double m0 = -kInf, i0 = kInf, mx = -kInf, mn = kInf;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const auto a = static_cast<double>(height(path, color, n));
    if (n <= 0) m0 = std::max(m0, a);
    if (n >= 0) i0 = std::min(i0, a);
    mx = std::max(mx, a);
    mn = std::min(mn, a);
  }
  r.M0 = m0;
  r.I0 = i0;
  r.Minf = mx;
  r.Iminf = mn;
  // Window-local supremum, a lower bound for the true carrier load.
  r.max_carrier_load = carrier_from_heights(path, color, 0).max_load();
  return r;
}

std::vector<RatioPoint> subcriticality_ratio(const PathEncoding& path, int color,
                                             std::int64_t lo, std::int64_t hi) {
  check_color(path.kappa, color);
  check_range(path, lo, hi);
  std::vector<RatioPoint> out;
  if (hi < lo) return out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  const std::int64_t start = sup_start(path, lo);
  std::int64_t sup = height(path, color, start);
  for (std::int64_t n = start; n <= hi; ++n) {
    const std::int64_t a = height(path, color, n);
    sup = std::max(sup, a);
    if (n < lo) continue;
    RatioPoint p{n, std::nullopt};
    if (sup != 0) p.ratio = static_cast<double>(a) / static_cast<double>(sup);
    out.push_back(p);
  }
  return out;
}

GoodSetReport good_set_check(const PathEncoding& path, const Horizon& horizon) {
  GoodSetReport rep;
  rep.horizon = horizon;
  const std::int64_t left = std::min<std::int64_t>(horizon.left, 0);
  const std::int64_t right = std::max<std::int64_t>(horizon.right, 0);
  check_range(path, left, right);
  const int kappa = path.kappa;
  const std::int64_t start = sup_start(path, left);
  const auto len = static_cast<std::size_t>(right - start + 1);

  // F[i][k] = sup_{m <= start+k} A_i S_m, A[i][k] = A_i S_{start+k}.
  std::vector<std::vector<double>> A(static_cast<std::size_t>(kappa) + 1, std::vector<double>(len));
  auto F = A;
  for (int i = 1; i <= kappa; ++i) {
    std::int64_t sup = height(path, i, start);
    for (std::size_t k = 0; k < len; ++k) {
      const std::int64_t a = height(path, i, start + static_cast<std::int64_t>(k));
      sup = std::max(sup, a);
      A[static_cast<std::size_t>(i)][k] = static_cast<double>(a);
      F[static_cast<std::size_t>(i)][k] = static_cast<double>(sup);
    }
  }
  auto idx = [&](std::int64_t n) { return static_cast<std::size_t>(n - start); };

  // Outer quarters.
  const std::int64_t plus_from = right - right / 4;
  const std::int64_t minus_to = left - left / 4;
  const bool have_plus = right > 0, have_minus = left < 0;

  for (int i = 1; i <= kappa; ++i) {
    const auto& a = A[static_cast<std::size_t>(i)];
    const auto& f = F[static_cast<std::size_t>(i)];
    ColorProxy c;
    c.color = i;
    auto scan = [&](std::int64_t from, std::int64_t to, double sign, double& mn, double& mx) {
      mn = kInf;
      mx = -kInf;
      for (std::int64_t n = from; n <= to; ++n) {
        const double fv = f[idx(n)];
        if (fv * sign <= 0) continue;
        const double r = a[idx(n)] / fv;
        mn = std::min(mn, r);
        mx = std::max(mx, r);
      }
      if (mn > mx) return Decision::Undecidable;
      return yes_no(std::abs(mn - 1) <= horizon.tolerance && std::abs(mx - 1) <= horizon.tolerance);
    };
    if (have_plus) c.ratio_plus = scan(plus_from, right, 1.0, c.min_ratio_plus, c.max_ratio_plus);
    if (have_minus) c.ratio_minus = scan(left, minus_to, -1.0, c.min_ratio_minus, c.max_ratio_minus);
    rep.colors.push_back(c);
  }

  for (int i = 1; i <= kappa; ++i) {
    for (int j = 1; j <= kappa; ++j) {
      if (i == j) continue;
      PairProxy p;
      p.i = i;
      p.j = j;
      bool any = false;
      auto scan = [&](std::int64_t from, std::int64_t to, double sign) {
        for (std::int64_t n = from; n <= to; ++n) {
          const double fi = F[static_cast<std::size_t>(i)][idx(n)];
          const double fj = F[static_cast<std::size_t>(j)][idx(n)];
          if (fi * sign <= 0 || fj * sign <= 0) continue;
          p.max_ratio = std::max(p.max_ratio, fj / fi);
          any = true;
        }
      };
      if (have_plus) scan(plus_from, right, 1.0);
      if (have_minus) scan(left, minus_to, -1.0);
      p.bounded = any ? yes_no(p.max_ratio <= horizon.pair_bound) : Decision::Undecidable;
      rep.pairs.push_back(p);
    }
  }

  bool undecided = false, failed = false;
  auto fold = [&](Decision d) {
    if (d == Decision::No) failed = true;
    if (d == Decision::Undecidable) undecided = true;
  };
  for (const auto& c : rep.colors) {
    fold(c.ratio_plus);
    fold(c.ratio_minus);
  }
  for (const auto& p : rep.pairs) fold(p.bounded);
  rep.good = failed ? Decision::No : undecided ? Decision::Undecidable : Decision::Yes;
  return rep;
}

Configuration example_config(std::string_view name, int epochs) {
  if (epochs < 1) throw InvalidArgument("classify", "epochs must be positive");
  Configuration c;
  c.kappa = 2;
  auto repeat = [&](std::initializer_list<int> block, int times) {
    for (int t = 0; t < times; ++t) c.cells.insert(c.cells.end(), block);
  };
  if (name == "a") {
    c.offset = 0;
    c.boundary = Boundary::FiniteSupport;
    c.cells.push_back(0);
    for (int m = 1; m <= epochs; ++m) {
      c.cells.push_back(0);
      repeat({2}, 2 * m - 1);
      repeat({0, 1}, 2 * m - 1);
      c.cells.push_back(0);
      repeat({0, 1}, 2 * m);
    }
  } else if (name == "b") {
    c.offset = -3 * static_cast<std::int64_t>(epochs);
    c.boundary = Boundary::Windowed;
    repeat({0, 1, 2}, epochs);
    repeat({0, 2, 1}, 1);
    repeat({0, 1, 2}, epochs);
  } else if (name == "c") {
    c.offset = -3 * static_cast<std::int64_t>(epochs);
    c.boundary = Boundary::Windowed;
    repeat({0, 1, 2}, 2 * epochs + 1);
  } else {
    throw InvalidArgument("classify", "unknown example '" + std::string(name) + "'");
  }
  return c;
}

std::int64_t periodic_edge_load(const Configuration& config, int color, std::size_t period,
                                Side side) {
  check_color(config.kappa, color);
  if (side == Side::Right) return periodic_edge_load(mirror(config), color, period, Side::Left);
  if (period == 0 || period > config.cells.size())
    throw InvalidArgument("classify", "period must be in 1..window size");
  int balance = 0;
  for (std::size_t k = 0; k < period; ++k) {
    if (config.cells[k] == color) ++balance;
    if (config.cells[k] == 0) --balance;
  }
  if (balance > 0)
    throw DomainError("classify", "periodic tail carries more balls than empty sites", config.offset);
  // The load after each repetition is nondecreasing and bounded by the
  // period, so it settles within period + 1 passes.
  std::int64_t w = 0;
  for (std::size_t pass = 0; pass <= period + 1; ++pass) {
    const std::int64_t before = w;
    for (std::size_t k = 0; k < period; ++k) {
      if (config.cells[k] == color)
        ++w;
      else if (config.cells[k] == 0 && w > 0)
        --w;
    }
    if (w == before && pass > 0) break;
  }
  return w;
}

Configuration apply_word_periodic(const Configuration& config, const Word& word,
                                  std::size_t period) {
  Configuration c = config;
  for (const auto& l : word) {
    const std::int64_t load =
        periodic_edge_load(c, l.color, period, l.inverse ? Side::Right : Side::Left);
    const PathEncoding p = encode(c);
    c = decode(l.inverse ? apply_Ti_inverse(p, l.color, load) : apply_Ti(p, l.color, load));
  }
  return c;
}

std::optional<std::string> periodic_block(const Configuration& config, std::size_t period,
                                          std::size_t margin) {
  const std::size_t n = config.cells.size();
  if (period == 0 || n < 2 * margin + period) return std::nullopt;
  for (std::size_t k = margin; k < n - margin; ++k)
    if (config.cells[k] != config.cells[margin + (k - margin) % period]) return std::nullopt;
  const auto first = config.cells.begin() + static_cast<std::ptrdiff_t>(margin);
  return cells_to_string(std::vector<int>(first, first + static_cast<std::ptrdiff_t>(period)));
}

}  // namespace bbs
