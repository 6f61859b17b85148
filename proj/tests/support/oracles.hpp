#pragma once

// Reference implementations used only by the tests. Each one follows the
// textbook definition directly and shares no code with the library.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

// Colour-i balls, taken left to right, each moved to the nearest site to its
// right holding 0. Cells beyond the end are empty; the result is extended
// as far as needed.
inline std::vector<int> bbs_step(std::vector<int> cells, int color) {
  std::vector<char> moved(cells.size(), 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k] != color || moved[k]) continue;
    std::size_t t = k + 1;
    while (t < cells.size() && cells[t] != 0) ++t;
    if (t == cells.size()) {
      cells.push_back(0);
      moved.push_back(0);
    }
    cells[t] = color;
    moved[t] = 1;
    cells[k] = 0;
  }
  return cells;
}

// Same rule with balls travelling left. Returns the cells and how many sites
// were prepended.
inline std::vector<int> bbs_step_left(std::vector<int> cells, int color, std::size_t& prepended) {
  std::reverse(cells.begin(), cells.end());
  const std::size_t before = cells.size();
  cells = bbs_step(cells, color);
  prepended = cells.size() - before;
  std::reverse(cells.begin(), cells.end());
  return cells;
}

// a_j(n) on [lo, hi] by direct tally from a(0) = 0, where the cells occupy
// [offset, offset + size) and everything else is empty.
inline std::int64_t count(const std::vector<int>& cells, std::int64_t offset, int j,
                                       std::int64_t n) {
  auto cell = [&](std::int64_t m) -> int {
    if (m < offset || m >= offset + static_cast<std::int64_t>(cells.size())) return 0;
    return cells[static_cast<std::size_t>(m - offset)];
  };
  std::int64_t a = 0;
  if (n > 0)
    for (std::int64_t m = 1; m <= n; ++m) a += cell(m) == j;
  else
    for (std::int64_t m = n + 1; m <= 0; ++m) a -= cell(m) == j;
  return a;
}

inline std::int64_t height(const std::vector<int>& cells, std::int64_t offset, int i, std::int64_t n) {
  return count(cells, offset, 0, n) - count(cells, offset, i, n);
}

// Two-sided Pitman transform of values on [lo, lo + size), evaluated by the
// definition with the infimum restricted to the given window (the caller
// pads the window so that the true infimum is attained inside).
inline std::vector<double> pitman(const std::vector<double>& v, std::int64_t lo) {
  std::vector<double> out(v.size());
  const std::size_t zero = static_cast<std::size_t>(-lo);
  for (std::size_t n = 0; n < v.size(); ++n) {
    double inf_n = std::numeric_limits<double>::infinity(), inf_0 = inf_n;
    for (std::size_t m = 0; m <= n; ++m) inf_n = std::min(inf_n, v[m]);
    for (std::size_t m = 0; m <= zero; ++m) inf_0 = std::min(inf_0, v[m]);
    out[n] = v[n] - 2 * inf_n + 2 * inf_0;
  }
  return out;
}

inline std::vector<double> pitman_inverse(const std::vector<double>& v, std::int64_t lo) {
  std::vector<double> out(v.size());
  const std::size_t zero = static_cast<std::size_t>(-lo);
  for (std::size_t n = 0; n < v.size(); ++n) {
    double inf_n = std::numeric_limits<double>::infinity(), inf_0 = inf_n;
    for (std::size_t m = n; m < v.size(); ++m) inf_n = std::min(inf_n, v[m]);
    for (std::size_t m = zero; m < v.size(); ++m) inf_0 = std::min(inf_0, v[m]);
    out[n] = v[n] - 2 * inf_n + 2 * inf_0;
  }
  return out;
}

}  // namespace oracle
