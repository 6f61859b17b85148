#include "bbs/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bbs/carrier.hpp"
#include "bbs/errors.hpp"

namespace bbs {

namespace {

void check_color(int kappa, int color) {
  if (color < 1 || color > kappa) throw InvalidArgument("dynamics", "colour must be in {1..kappa}");
}

// sign * A_i S over [min(first,0), max(last,0)] (FiniteSupport) or the rows
// (Windowed).
ScalarPath height_path(const PathEncoding& path, int color, double sign) {
  check_color(path.kappa, color);
  if (path.rows() == 0) throw MalformedPathError("dynamics", "encoding without rows");
  std::int64_t lo = path.first_index(), hi = path.last_index();
  if (path.boundary == Boundary::FiniteSupport) {
    lo = std::min<std::int64_t>(lo, 0);
    hi = std::max<std::int64_t>(hi, 0);
  } else if (!path.has_row(0)) {
    throw OutOfWindowError("dynamics", "windowed encoding needs index 0 inside its window", 0);
  }
  ScalarPath p;
  p.lo = lo;
  p.values.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t n = lo; n <= hi; ++n)
    p.values.push_back(sign * static_cast<double>(height(path, color, n)));
  if (path.boundary == Boundary::FiniteSupport) {
    // A_i S rises by one per empty site on both tails.
    p.left = Tail::with_slope(sign);
    p.right = Tail::with_slope(sign);
  } else {
    p.left = Tail::open();
    p.right = Tail::open();
  }
  return p;
}

// Rows first..last with A_i replaced by `a_new` and a_0 + a_i kept.
PathEncoding rebuild(const PathEncoding& path, int color, const ScalarPath& a_new, double sign,
                     std::int64_t first, std::int64_t last) {
  PathEncoding out;
  out.kappa = path.kappa;
  out.boundary = path.boundary;
  out.offset = first + 1;
  const std::size_t w = path.width();
  out.counts.reserve(static_cast<std::size_t>(last - first + 1) * w);
  for (std::int64_t n = first; n <= last; ++n) {
    const double v = sign * a_new.at(n);
    const auto a = static_cast<std::int64_t>(std::llround(v));
    if (std::abs(v - static_cast<double>(a)) > 1e-9)
      throw MalformedPathError("dynamics", "transformed height is not an integer", n);
    const std::int64_t s = path.count(0, n) + path.count(color, n);
    if ((s + a) % 2 != 0)
      throw MalformedPathError("dynamics", "transformed height has the wrong parity", n);
    for (int j = 0; j <= path.kappa; ++j) {
      if (j == 0)
        out.counts.push_back((s + a) / 2);
      else if (j == color)
        out.counts.push_back((s - a) / 2);
      else
        out.counts.push_back(path.count(j, n));
    }
  }
  return out;
}

}  // namespace

ScalarPath negated_height_path(const PathEncoding& path, int color,
                               std::optional<std::int64_t> edge_load) {
  ScalarPath p = height_path(path, color, -1.0);
  if (path.boundary == Boundary::Windowed && edge_load) {
    if (*edge_load < 0) throw InvalidArgument("dynamics", "negative edge load");
    p.left = Tail::open(-(static_cast<double>(height(path, color, path.first_index())) +
                          static_cast<double>(*edge_load)));
  }
  return p;
}

PathEncoding apply_Ti(const PathEncoding& path, int color, std::optional<std::int64_t> edge_load) {
  if (path.boundary == Boundary::Windowed && !edge_load)
    throw UndecidableError("dynamics", "carrier load at the left edge is unknown",
                           path.first_index());
  const ScalarPath a_new = pitman_two_sided(negated_height_path(path, color, edge_load));
  if (path.boundary == Boundary::Windowed)
    return rebuild(path, color, a_new, 1.0, path.first_index(), path.last_index());

  std::int64_t sup = height(path, color, path.first_index());
  for (std::int64_t n = path.first_index(); n <= path.last_index(); ++n)
    sup = std::max(sup, height(path, color, n));
  const std::int64_t load = sup - height(path, color, path.last_index());
  return rebuild(path, color, a_new, 1.0, path.first_index(), path.last_index() + load);
}

PathEncoding apply_Ti_inverse(const PathEncoding& path, int color,
                              std::optional<std::int64_t> edge_load) {
  ScalarPath a = height_path(path, color, 1.0);
  if (path.boundary == Boundary::Windowed) {
    if (!edge_load)
      throw UndecidableError("dynamics", "carrier load at the right edge is unknown",
                             path.last_index());
    if (*edge_load < 0) throw InvalidArgument("dynamics", "negative edge load");
    a.right = Tail::open(static_cast<double>(height(path, color, path.last_index())) -
                         static_cast<double>(*edge_load));
    const ScalarPath a_new = pitman_inverse(a);
    return rebuild(path, color, a_new, -1.0, path.first_index(), path.last_index());
  }
  const ScalarPath a_new = pitman_inverse(a);
  std::int64_t inf = height(path, color, path.last_index());
  for (std::int64_t n = path.first_index(); n <= path.last_index(); ++n)
    inf = std::min(inf, height(path, color, n));
  const std::int64_t load = height(path, color, path.first_index()) - inf;
  return rebuild(path, color, a_new, -1.0, path.first_index() - load, path.last_index());
}

Word parse_word(std::string_view text) {
  Word w;
  std::size_t k = 0;
  while (k < text.size()) {
    const char c = text[k];
    if (c == ' ' || c == ',' || c == '\t') {
      ++k;
      continue;
    }
    bool inverse = false;
    if (c == '+' || c == '-') {
      inverse = c == '-';
      ++k;
    }
    std::size_t start = k;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
    if (start == k) throw ParseError("dynamics", "expected a colour in word '" + std::string(text) + "'");
    const int color = std::stoi(std::string(text.substr(start, k - start)));
    if (color < 1) throw ParseError("dynamics", "colours in a word start at 1");
    w.push_back(Letter{color, inverse});
  }
  return w;
}

std::string format_word(const Word& word) {
  std::string s;
  for (const auto& l : word) s += (l.inverse ? "-" : "+") + std::to_string(l.color);
  return s;
}

Word full_update(int kappa) {
  Word w;
  for (int i = 1; i <= kappa; ++i) w.push_back(Letter{i, false});
  return w;
}

namespace {

template <class F>
auto run_letter(std::size_t k, const Letter& l, F&& f) {
  const std::string where = "letter " + std::to_string(k) + " (" +
                            (l.inverse ? "-" : "+") + std::to_string(l.color) + "): ";
  try {
    return f();
  } catch (const UndecidableError& e) {
    throw UndecidableError("dynamics", where + e.what());
  } catch (const Error& e) {
    throw DomainError("dynamics", where + e.what());
  }
}

}  // namespace

PathEncoding apply_word(const PathEncoding& path, const Word& word) {
  PathEncoding p = path;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const Letter& l = word[k];
    p = run_letter(k, l, [&] {
      return l.inverse ? apply_Ti_inverse(p, l.color) : apply_Ti(p, l.color);
    });
  }
  return p;
}

Configuration apply_word_direct(const Configuration& config, const Word& word) {
  Configuration c = config;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const Letter& l = word[k];
    c = run_letter(k, l, [&] {
      return l.inverse ? apply_Ti_inverse_direct(c, l.color) : apply_Ti_direct(c, l.color);
    });
  }
  return c;
}

std::int64_t sup_height_left_of_zero(const PathEncoding& path, int color) {
  if (path.boundary != Boundary::FiniteSupport)
    throw UndecidableError("dynamics", "sup over the left half-line needs FiniteSupport");
  check_color(path.kappa, color);
  // Left of the window A_i falls by one per step, so the sup is attained on
  // [min(first,0), 0].
  const std::int64_t lo = std::min<std::int64_t>(path.first_index(), 0);
  std::int64_t m = height(path, color, lo);
  for (std::int64_t n = lo; n <= 0; ++n) m = std::max(m, height(path, color, n));
  return m;
}

std::int64_t cross_height_check(const PathEncoding& path, int i, int j) {
  if (path.boundary != Boundary::FiniteSupport)
    throw UndecidableError("dynamics", "cross-height identities are checked on FiniteSupport only");
  check_color(path.kappa, i);
  check_color(path.kappa, j);
  if (i == j) throw InvalidArgument("dynamics", "cross-height check needs i != j");
  const PathEncoding out = apply_Ti(path, i);
  const std::int64_t m0 = sup_height_left_of_zero(path, i);
  const std::int64_t lo = std::min({path.first_index(), out.first_index(), std::int64_t{0}});
  const std::int64_t hi = std::max({path.last_index(), out.last_index(), std::int64_t{0}});
  std::int64_t worst = 0;
  std::int64_t sup = height(path, i, lo);
  for (std::int64_t n = lo; n <= hi; ++n) {
    const std::int64_t ai = height(path, i, n);
    sup = std::max(sup, ai);
    const std::int64_t w = sup - ai;
    const std::int64_t aj = height(path, j, n);
    const std::int64_t aj_new = height(out, j, n);
    const std::int64_t ai_new = height(out, i, n);
    worst = std::max(worst, std::abs(aj_new - (aj + w - m0)));
    // Compare 2 A_j T_i S with 2 A_j S + A_i T_i S - A_i S to stay in integers.
    worst = std::max(worst, std::abs(2 * aj_new - (2 * aj + ai_new - ai)));
  }
  return worst;
}

VectorPath to_vector_path(const PathEncoding& path, const SimplexBasis& basis) {
  if (path.boundary != Boundary::FiniteSupport)
    throw UndecidableError("dynamics", "vector paths need FiniteSupport tails");
  if (basis.kappa() != path.kappa) throw InvalidArgument("dynamics", "basis kappa mismatch");
  const std::int64_t lo = std::min<std::int64_t>(path.first_index(), 0);
  const std::int64_t hi = std::max<std::int64_t>(path.last_index(), 0);
  VectorPath s;
  s.lo = lo;
  for (std::int64_t n = lo; n <= hi; ++n) s.values.push_back(path_point(path, basis, n));
  s.left = VectorTail::with_step(basis[0]);
  s.right = VectorTail::with_step(basis[0]);
  return s;
}

PathEncoding from_vector_path(const VectorPath& s, const SimplexBasis& basis, std::int64_t first,
                              std::int64_t last, Boundary boundary) {
  PathEncoding out;
  out.kappa = basis.kappa();
  out.offset = first + 1;
  out.boundary = boundary;
  const double width = static_cast<double>(out.width());
  for (std::int64_t n = first; n <= last; ++n) {
    const Vec c = decompose(s.at(n), basis);
    for (double x : c) {
      const double v = x + static_cast<double>(n) / width;
      const auto r = std::llround(v);
      if (std::abs(v - static_cast<double>(r)) > 1e-9)
        throw MalformedPathError("dynamics", "vector path is not a lattice path", n);
      out.counts.push_back(r);
    }
  }
  return out;
}

}  // namespace bbs
