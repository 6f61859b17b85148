#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bbs/dynamics.hpp"
#include "bbs/lattice.hpp"
#include "bbs/pitman.hpp"

namespace bbs {

struct RatioPoint {
  std::int64_t n = 0;
  std::optional<double> ratio;  // empty where sup_{m<=n} A_i S_m = 0
};

/// Reversibility data for one colour.
///
/// M0 = sup_{n<=0} A_i S_n, I0 = inf_{n>=0} A_i S_n, Minf = sup_Z A_i S,
/// Iminf = inf_Z A_i S. When `exact` is false these are the extrema over the
/// stored window only.
struct ClassReport {
  int color = 1;
  Boundary boundary = Boundary::FiniteSupport;
  bool exact = true;
  double M0 = 0, I0 = 0, Minf = 0, Iminf = 0;
  std::int64_t max_carrier_load = 0;  // observed over the window
  Decision t_inv_t = Decision::Undecidable;  // T_i^{-1} T_i S = S
  Decision t_t_inv = Decision::Undecidable;  // T_i T_i^{-1} S = S
  Decision reversible = Decision::Undecidable;
  Decision subcritical_minus = Decision::Undecidable;
  Decision subcritical_plus = Decision::Undecidable;
  Decision critical_minus = Decision::Undecidable;
  Decision critical_plus = Decision::Undecidable;
  std::vector<RatioPoint> ratios;  // over the stored rows
};

/// Under FiniteSupport every question is decided from the tails: A_i S grows
/// by one per empty site on both sides, so sup and inf recur and the
/// configuration is sub-critical on both sides. Windowed input only gets
/// window extrema and undecidable flags.
ClassReport reversibility_report(const PathEncoding& path, int color);

/// A_i S_n / sup_{m<=n} A_i S_m for n in [lo, hi]. Under Windowed the
/// supremum runs over the stored part of (-inf, n] and the range must lie in
/// the rows.
std::vector<RatioPoint> subcriticality_ratio(const PathEncoding& path, int color,
                                             std::int64_t lo, std::int64_t hi);

/// Finite-window proxy parameters: ratios are inspected over the outer
/// quarter of [left, 0] and of [0, right].
struct Horizon {
  std::int64_t left = 0;
  std::int64_t right = 0;
  double tolerance = 0.1;
  double pair_bound = 100.0;
};

struct ColorProxy {
  int color = 1;
  double min_ratio_plus = 1, max_ratio_plus = 1;
  double min_ratio_minus = 1, max_ratio_minus = 1;
  Decision ratio_plus = Decision::Undecidable;   // A_i / F_i near 1 as n -> +inf
  Decision ratio_minus = Decision::Undecidable;  // as n -> -inf
};

struct PairProxy {
  int i = 1, j = 2;
  double max_ratio = 0;  // max of F_j / F_i over both outer quarters
  Decision bounded = Decision::Undecidable;
};

struct GoodSetReport {
  Horizon horizon;
  std::vector<ColorProxy> colors;
  std::vector<PairProxy> pairs;
  Decision good = Decision::Undecidable;
};

/// Proxy for membership in the good set: F_i(n) = sup_{m<=n} A_i S_m,
/// |A_i/F_i - 1| <= tolerance over the outer quarters, and F_j/F_i <=
/// pair_bound there. Indices where F_i does not have the sign of n are
/// skipped.
GoodSetReport good_set_check(const PathEncoding& path, const Horizon& horizon);

/// The three kappa = 2 configurations:
///  a: FiniteSupport, site 0 empty, then for m = 1..epochs the block
///     0 2^(2m-1) (01)^(2m-1) 0 (01)^(2m)
///  b: Windowed, (012)^epochs 021 (012)^epochs starting at -3 epochs
///  c: Windowed, (012)^(2 epochs + 1) starting at -3 epochs
Configuration example_config(std::string_view name, int epochs);

enum class Side { Left, Right };

/// Carrier load at one edge assuming the configuration continues beyond
/// that edge by repeating its first (Left) or last (Right) `period` cells.
/// Right loads are for T_i^{-1}.
std::int64_t periodic_edge_load(const Configuration& config, int color, std::size_t period,
                                Side side);

/// Word on a Windowed configuration whose edges continue periodically.
Configuration apply_word_periodic(const Configuration& config, const Word& word,
                                  std::size_t period);

/// The length-`period` block that repeats over cells [margin, size-margin),
/// if any.
std::optional<std::string> periodic_block(const Configuration& config, std::size_t period,
                                          std::size_t margin);

}  // namespace bbs
