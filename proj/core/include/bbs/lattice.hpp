#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bbs/simplex.hpp"

namespace bbs {

/// How a finite window relates to the rest of Z.
///  - FiniteSupport: every site outside the window is empty (symbol 0).
///  - Windowed: nothing is known outside the window.
enum class Boundary { FiniteSupport, Windowed };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

/// Particle configuration eta restricted to the sites offset .. offset+size-1.
/// Symbol 0 is an empty box, 1..kappa are ball colours.
struct Configuration {
  int kappa = 1;
  std::int64_t offset = 0;
  std::vector<int> cells;
  Boundary boundary = Boundary::FiniteSupport;

  std::int64_t first() const noexcept { return offset; }
  std::int64_t last() const noexcept {
    return offset + static_cast<std::int64_t>(cells.size()) - 1;
  }
  bool contains(std::int64_t n) const noexcept { return n >= first() && n <= last(); }

  /// eta_n. Outside the window this is 0 under FiniteSupport and an
  /// OutOfWindowError under Windowed.
  int at(std::int64_t n) const;

  /// Throws InvalidArgument when kappa < 1 or a cell is out of {0..kappa}.
  void validate() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Same infinite configuration. Two FiniteSupport windows compare equal when
/// they agree after padding with empty sites; Windowed windows must match
/// exactly.
bool same_state(const Configuration& a, const Configuration& b);

/// FiniteSupport copy re-windowed to [lo, hi]. Throws DomainError if a ball
/// would be cut off.
Configuration rewindow(const Configuration& c, std::int64_t lo, std::int64_t hi);

/// Smallest FiniteSupport window holding every ball (keeps an empty window at
/// the original offset when there are no balls).
Configuration trimmed(const Configuration& c);

/// Cumulative colour counts a_0(n)..a_kappa(n) anchored at a(0) = 0.
///
/// Rows cover the path indices offset-1 .. offset+cells-1, i.e. one row per
/// site plus the row just left of the first site. Under FiniteSupport the
/// anchor may lie outside the rows; the rows are still expressed relative to
/// a(0) = 0 by extending with empty sites. Windowed encodings require 0 to be
/// one of the row indices.
struct PathEncoding {
  int kappa = 1;
  std::int64_t offset = 0;
  Boundary boundary = Boundary::FiniteSupport;
  std::vector<std::int64_t> counts;  // row-major, (kappa+1) per row

  std::size_t width() const noexcept { return static_cast<std::size_t>(kappa) + 1; }
  std::size_t rows() const noexcept { return counts.size() / width(); }
  std::int64_t first_index() const noexcept { return offset - 1; }
  std::int64_t last_index() const noexcept {
    return first_index() + static_cast<std::int64_t>(rows()) - 1;
  }
  bool has_row(std::int64_t n) const noexcept {
    return n >= first_index() && n <= last_index();
  }

  /// Stored row for path index n (must be inside the rows).
  std::span<const std::int64_t> row(std::int64_t n) const;

  /// a_color(n); extended with empty sites outside the rows under
  /// FiniteSupport, OutOfWindowError under Windowed.
  std::int64_t count(int color, std::int64_t n) const;

  friend bool operator==(const PathEncoding&, const PathEncoding&) = default;
};

PathEncoding encode(const Configuration& config);

/// Inverse of encode. Throws MalformedPathError when a step does not raise
/// exactly one count by one, or when the anchor a(0) = 0 is violated.
Configuration decode(const PathEncoding& path);

/// A_i S_n = a_0(n) - a_i(n).
std::int64_t height(const PathEncoding& path, int color, std::int64_t n);

/// A_i S_n computed as -2 (e_i - e_0).S_n / |e_i - e_0|^2 with S_n built from
/// the simplex vectors.
double height_via_projection(const PathEncoding& path, const SimplexBasis& basis,
                             int color, std::int64_t n);

/// S_n = Sum_j a_j(n) e_j.
Vec path_point(const PathEncoding& path, const SimplexBasis& basis, std::int64_t n);

/// Swap the symbols 0 and i at every site.
Configuration permute_zero_i(const Configuration& config, int color);

// Text format: "kappa=K offset=N cells=<symbols> [boundary=finite|windowed]".
// Symbols are 0-9, then a-z, then A-Z, so at most 62 distinct symbols.
inline constexpr int kMaxTextKappa = 61;

char symbol_char(int symbol);
int symbol_value(char c);
std::string cells_to_string(std::span<const int> cells);
std::vector<int> cells_from_string(std::string_view text);

std::string format_configuration(const Configuration& config);
Configuration parse_configuration(std::string_view text);
Configuration read_configuration_file(const std::string& path);

/// CSV with header n,a_0..a_kappa,A_1..A_kappa; one line per stored row.
void write_encoding_csv(std::ostream& os, const PathEncoding& path);

}  // namespace bbs
