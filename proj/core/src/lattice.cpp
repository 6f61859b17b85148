#include "bbs/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bbs/errors.hpp"

namespace bbs {

std::string_view to_string(Boundary b) {
  return b == Boundary::FiniteSupport ? "finite" : "windowed";
}

Boundary boundary_from_string(std::string_view s) {
  if (s == "finite" || s == "finite-support" || s == "FiniteSupport")
    return Boundary::FiniteSupport;
  if (s == "windowed" || s == "Windowed") return Boundary::Windowed;
  throw ParseError("lattice", "unknown boundary '" + std::string(s) + "'");
}

int Configuration::at(std::int64_t n) const {
  if (contains(n)) return cells[static_cast<std::size_t>(n - offset)];
  if (boundary == Boundary::Windowed)
    throw OutOfWindowError("lattice", "site outside a windowed configuration", n);
  return 0;
}

void Configuration::validate() const {
  if (kappa < 1) throw InvalidArgument("lattice", "kappa must be >= 1");
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (cells[k] < 0 || cells[k] > kappa)
      throw InvalidArgument("lattice", "cell symbol outside {0..kappa}",
                            offset + static_cast<std::int64_t>(k));
}

bool same_state(const Configuration& a, const Configuration& b) {
  if (a.kappa != b.kappa || a.boundary != b.boundary) return false;
  if (a.boundary == Boundary::Windowed) return a == b;
  const std::int64_t lo = std::min(a.first(), b.first());
  const std::int64_t hi = std::max(a.last(), b.last());
  for (std::int64_t n = lo; n <= hi; ++n)
    if (a.at(n) != b.at(n)) return false;
  return true;
}

Configuration rewindow(const Configuration& c, std::int64_t lo, std::int64_t hi) {
  if (c.boundary != Boundary::FiniteSupport)
    throw DomainError("lattice", "only FiniteSupport configurations can be re-windowed");
  for (std::int64_t n = c.first(); n <= c.last(); ++n)
    if ((n < lo || n > hi) && c.at(n) != 0)
      throw DomainError("lattice", "re-windowing would drop a ball", n);
  Configuration out{c.kappa, lo, {}, c.boundary};
  out.cells.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, hi - lo + 1)));
  for (std::int64_t n = lo; n <= hi; ++n) out.cells.push_back(c.at(n));
  return out;
}

Configuration trimmed(const Configuration& c) {
  if (c.boundary != Boundary::FiniteSupport) return c;
  auto first = std::find_if(c.cells.begin(), c.cells.end(), [](int s) { return s != 0; });
  if (first == c.cells.end()) return Configuration{c.kappa, c.offset, {}, c.boundary};
  auto last = std::find_if(c.cells.rbegin(), c.cells.rend(), [](int s) { return s != 0; });
  const auto lo = c.offset + (first - c.cells.begin());
  const auto hi = c.offset + static_cast<std::int64_t>(c.cells.size()) - 1 -
                  (last - c.cells.rbegin());
  return rewindow(c, lo, hi);
}

std::span<const std::int64_t> PathEncoding::row(std::int64_t n) const {
  if (!has_row(n)) throw OutOfWindowError("lattice", "path index outside the rows", n);
  const auto r = static_cast<std::size_t>(n - first_index());
  return std::span<const std::int64_t>(counts).subspan(r * width(), width());
}

std::int64_t PathEncoding::count(int color, std::int64_t n) const {
  if (color < 0 || color > kappa) throw InvalidArgument("lattice", "colour outside {0..kappa}");
  const auto c = static_cast<std::size_t>(color);
  if (has_row(n)) return row(n)[c];
  if (boundary == Boundary::Windowed || rows() == 0)
    throw OutOfWindowError("lattice", "path index outside a windowed encoding", n);
  // Every step outside the rows is an empty site, i.e. +1 on a_0.
  const std::int64_t edge = n < first_index() ? first_index() : last_index();
  const std::int64_t base = row(edge)[c];
  return color == 0 ? base + (n - edge) : base;
}

PathEncoding encode(const Configuration& config) {
  config.validate();
  PathEncoding p;
  p.kappa = config.kappa;
  p.offset = config.offset;
  p.boundary = config.boundary;
  const std::size_t w = p.width();
  const std::size_t rows = config.cells.size() + 1;
  p.counts.assign(rows * w, 0);
  for (std::size_t r = 1; r < rows; ++r) {
    for (std::size_t c = 0; c < w; ++c) p.counts[r * w + c] = p.counts[(r - 1) * w + c];
    ++p.counts[r * w + static_cast<std::size_t>(config.cells[r - 1])];
  }

  // Shift so that a(0) = 0.
  std::vector<std::int64_t> anchor(w, 0);
  const std::int64_t lo = p.first_index();
  const std::int64_t hi = p.last_index();
  if (0 >= lo && 0 <= hi) {
    const auto r = static_cast<std::size_t>(-lo);
    std::copy_n(p.counts.begin() + static_cast<std::ptrdiff_t>(r * w), w, anchor.begin());
  } else if (config.boundary == Boundary::Windowed) {
    throw OutOfWindowError("lattice", "windowed encoding needs index 0 inside its window", 0);
  } else if (0 < lo) {
    // Sites 1..lo are empty, so a(lo) = (lo, 0, ..., 0).
    anchor[0] = -lo;
  } else {
    // Sites hi+1..0 are empty, so a(hi) = (hi, 0, ..., 0).
    const auto last = (rows - 1) * w;
    for (std::size_t c = 0; c < w; ++c) anchor[c] = p.counts[last + c];
    anchor[0] -= hi;
  }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < w; ++c) p.counts[r * w + c] -= anchor[c];
  return p;
}

Configuration decode(const PathEncoding& path) {
  if (path.kappa < 1) throw MalformedPathError("lattice", "kappa must be >= 1");
  if (path.counts.size() % path.width() != 0 || path.rows() == 0)
    throw MalformedPathError("lattice", "count table is not a whole number of rows");
  const std::size_t w = path.width();
  Configuration c{path.kappa, path.offset, {}, path.boundary};
  c.cells.reserve(path.rows() - 1);
  for (std::int64_t n = path.first_index(); n <= path.last_index(); ++n) {
    const auto r = path.row(n);
    std::int64_t total = 0;
    for (auto x : r) total += x;
    if (total != n) throw MalformedPathError("lattice", "counts do not sum to the index", n);
    if (n == path.first_index()) continue;
    const auto prev = path.row(n - 1);
    int color = -1;
    for (std::size_t k = 0; k < w; ++k) {
      const auto d = r[k] - prev[k];
      if (d == 0) continue;
      if (d != 1 || color != -1)
        throw MalformedPathError("lattice", "step is not a single unit increment", n);
      color = static_cast<int>(k);
    }
    if (color == -1) throw MalformedPathError("lattice", "step without increment", n);
    c.cells.push_back(color);
  }
  if (path.has_row(0)) {
    for (auto x : path.row(0))
      if (x != 0) throw MalformedPathError("lattice", "a(0) must vanish", 0);
  } else if (path.boundary == Boundary::FiniteSupport) {
    // a(n) must match the empty extension to the anchor.
    const std::int64_t edge = 0 < path.first_index() ? path.first_index() : path.last_index();
    const auto r = path.row(edge);
    for (std::size_t k = 1; k < w; ++k)
      if (r[k] != 0) throw MalformedPathError("lattice", "anchor a(0) = 0 violated", edge);
    if (r[0] != edge) throw MalformedPathError("lattice", "anchor a(0) = 0 violated", edge);
  } else {
    throw MalformedPathError("lattice", "windowed encoding without index 0");
  }
  return c;
}

std::int64_t height(const PathEncoding& path, int color, std::int64_t n) {
  if (color < 1 || color > path.kappa)
    throw InvalidArgument("lattice", "height colour must be in {1..kappa}");
  return path.count(0, n) - path.count(color, n);
}

Vec path_point(const PathEncoding& path, const SimplexBasis& basis, std::int64_t n) {
  Vec a(path.width());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = static_cast<double>(path.count(static_cast<int>(k), n));
  return basis.combine(a);
}

double height_via_projection(const PathEncoding& path, const SimplexBasis& basis,
                             int color, std::int64_t n) {
  if (color < 1 || color > path.kappa)
    throw InvalidArgument("lattice", "height colour must be in {1..kappa}");
  if (basis.kappa() != path.kappa) throw InvalidArgument("lattice", "basis kappa mismatch");
  const Vec s = path_point(path, basis, n);
  const Vec r = basis.root(color);
  return -2.0 * dot(r, s) / norm2(r);
}

Configuration permute_zero_i(const Configuration& config, int color) {
  if (color < 1 || color > config.kappa)
    throw InvalidArgument("lattice", "colour must be in {1..kappa}");
  Configuration out = config;
  for (auto& s : out.cells) {
    if (s == 0)
      s = color;
    else if (s == color)
      s = 0;
  }
  return out;
}

char symbol_char(int symbol) {
  if (symbol >= 0 && symbol < 10) return static_cast<char>('0' + symbol);
  if (symbol >= 10 && symbol < 36) return static_cast<char>('a' + symbol - 10);
  if (symbol >= 36 && symbol <= kMaxTextKappa) return static_cast<char>('A' + symbol - 36);
  throw InvalidArgument("lattice", "symbol " + std::to_string(symbol) + " has no text form");
}

int symbol_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 36;
  throw ParseError("lattice", std::string("invalid cell symbol '") + c + "'");
}

std::string cells_to_string(std::span<const int> cells) {
  std::string s;
  s.reserve(cells.size());
  for (int x : cells) s.push_back(symbol_char(x));
  return s;
}

std::vector<int> cells_from_string(std::string_view text) {
  std::vector<int> cells;
  cells.reserve(text.size());
  for (char ch : text) {
    if (ch == ' ' || ch == '_' || ch == ',') continue;
    cells.push_back(symbol_value(ch));
  }
  return cells;
}

std::string format_configuration(const Configuration& config) {
  if (config.kappa > kMaxTextKappa)
    throw InvalidArgument("lattice", "kappa too large for the text format");
  std::ostringstream os;
  os << "kappa=" << config.kappa << " offset=" << config.offset
     << " cells=" << cells_to_string(config.cells);
  if (config.boundary != Boundary::FiniteSupport) os << " boundary=" << to_string(config.boundary);
  return os.str();
}

Configuration parse_configuration(std::string_view text) {
  Configuration c;
  bool have_kappa = false, have_cells = false;
  std::istringstream is{std::string(text)};
  std::string token;
  while (is >> token) {
    if (token.starts_with("#")) break;
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("lattice", "expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "kappa") {
        c.kappa = std::stoi(value);
        have_kappa = true;
      } else if (key == "offset") {
        c.offset = std::stoll(value);
      } else if (key == "cells") {
        c.cells = cells_from_string(value);
        have_cells = true;
      } else if (key == "boundary") {
        c.boundary = boundary_from_string(value);
      } else {
        throw ParseError("lattice", "unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError("lattice", "bad value for '" + key + "'");
    }
  }
  if (!have_kappa) throw ParseError("lattice", "missing kappa=");
  if (!have_cells) throw ParseError("lattice", "missing cells=");
  if (c.kappa < 1 || c.kappa > kMaxTextKappa)
    throw ParseError("lattice", "kappa out of range for the text format");
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError("lattice", e.what());
  }
  return c;
}

Configuration read_configuration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("lattice", "cannot open '" + path + "'");
  std::string line, all;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    all += line + " ";
  }
  return parse_configuration(all);
}

void write_encoding_csv(std::ostream& os, const PathEncoding& path) {
  os << "n";
  for (int j = 0; j <= path.kappa; ++j) os << ",a_" << j;
  for (int j = 1; j <= path.kappa; ++j) os << ",A_" << j;
  os << '\n';
  for (std::int64_t n = path.first_index(); n <= path.last_index(); ++n) {
    const auto r = path.row(n);
    os << n;
    for (auto x : r) os << ',' << x;
    for (int j = 1; j <= path.kappa; ++j) os << ',' << (r[0] - r[static_cast<std::size_t>(j)]);
    os << '\n';
  }
}

}  // namespace bbs
