#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bbs/lattice.hpp"
#include "bbs/pitman.hpp"

namespace bbs {

/// -A_i S as a scalar path over [min(first,0), max(last,0)]. Under
/// FiniteSupport the tails are linear with slope -1 on both sides. Under
/// Windowed the left tail carries inf = -(A_i S_first + edge_load) and the
/// right tail is open; without an edge load the left tail is open too.
ScalarPath negated_height_path(const PathEncoding& path, int color,
                               std::optional<std::int64_t> edge_load = std::nullopt);

/// T_i through the reflection A_i T_i S = P_1(-A_i S), keeping a_j for
/// j not in {0, i} and a_0 + a_i.
///
/// FiniteSupport output covers the sites first .. last + W, W being the carrier
/// load at the right edge. Windowed input needs the carrier load entering at
/// the left edge and keeps its window.
PathEncoding apply_Ti(const PathEncoding& path, int color,
                      std::optional<std::int64_t> edge_load = std::nullopt);

/// T_i^{-1} through A_i T_i^{-1} S = -P_1^{-1}(A_i S). FiniteSupport output
/// grows to the left; Windowed input needs the load entering at the right
/// edge.
PathEncoding apply_Ti_inverse(const PathEncoding& path, int color,
                              std::optional<std::int64_t> edge_load = std::nullopt);

/// One letter of a word: T_color, or its inverse.
struct Letter {
  int color = 1;
  bool inverse = false;
  friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

/// "+1+2-3", "1 2 3" or "1,2,-1". Throws ParseError.
Word parse_word(std::string_view text);
std::string format_word(const Word& word);

/// [+1, ..., +kappa], i.e. T = T_kappa o ... o T_1.
Word full_update(int kappa);

/// Letters applied left to right. A failing letter is reported as a
/// DomainError naming its position.
PathEncoding apply_word(const PathEncoding& path, const Word& word);

/// Same word through the carrier rule.
Configuration apply_word_direct(const Configuration& config, const Word& word);

/// Max absolute discrepancy of
///   A_j T_i S_n = A_j S_n + W_n - M_0   and
///   A_j T_i S_n = A_j S_n + (A_i T_i S_n - A_i S_n) / 2
/// over every index of the input and output windows, where W is the two-sided
/// carrier and M_0 = sup_{n<=0} A_i S_n. FiniteSupport only.
std::int64_t cross_height_check(const PathEncoding& path, int i, int j);

/// sup_{n<=0} A_i S_n for a FiniteSupport path.
std::int64_t sup_height_left_of_zero(const PathEncoding& path, int color);

/// Simplex-valued path S over [min(first,0), max(last,0)] with tails of step
/// e_0 (FiniteSupport only).
VectorPath to_vector_path(const PathEncoding& path, const SimplexBasis& basis);

/// Inverse of to_vector_path on the rows first .. last. Coefficients must be
/// within 1e-9 of integers.
PathEncoding from_vector_path(const VectorPath& s, const SimplexBasis& basis,
                              std::int64_t first, std::int64_t last, Boundary boundary);

}  // namespace bbs
