#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbs/lattice.hpp"
#include "bbs/rng.hpp"

namespace bbs {

/// Law of a single site: P(eta_0 = j) = probs[j], j = 0..kappa.
struct ColorLaw {
  int kappa = 1;
  std::vector<double> probs;

  /// Throws InvalidArgument unless every p_j >= 0 and they sum to 1 within
  /// 1e-12.
  void validate() const;
  /// p_i < p_0 for every colour i.
  bool admissible() const;

  static ColorLaw from_probs(std::vector<double> probs);
};

/// Windowed configuration on [lo, hi] with i.i.d. cells.
Configuration sample_iid(const ColorLaw& law, std::int64_t lo, std::int64_t hi, std::uint64_t seed);

/// p_j = 1/(kappa+1) + c_j / sqrt(n kappa). Requires sum c = 0, c_0 > c_i for
/// every colour and every p_j in (0, 1).
ColorLaw near_critical_law(int kappa, std::span<const double> c, double n);

Configuration sample_near_critical(int kappa, std::span<const double> c, double n, std::int64_t lo,
                                   std::int64_t hi, std::uint64_t seed);

struct DensityEntry {
  int color = 1;
  std::int64_t n = 0;
  double height = 0;  // A_i S_n
  double ratio = 0;   // A_i S_n / ((p_0 - p_i) n)
  double z = 0;       // (A_i S_n - (p_0 - p_i) n) / sqrt(n Var)
};

/// Evaluated at the last site of the window, which must lie right of 0.
std::vector<DensityEntry> density_check(const Configuration& config, const ColorLaw& law);

struct InvarianceSettings {
  ColorLaw law;
  int color = 1;
  std::int64_t sites = 1'000'000;  // sample on [-sites, sites)
  int word_length = 2;
  int trials = 10;
  std::uint64_t seed = 1;
  double threshold = 1e-3;
  int required_passes = 9;
  unsigned threads = 0;
  /// Null law for the chi-square comparison; the sampling law by default.
  std::optional<ColorLaw> null_law;
};

struct TrialResult {
  std::uint64_t seed = 0;
  bool contaminated = false;
  double statistic = 0;
  double df = 0;
  double p_value = 0;
  bool pass = false;
  std::size_t blocks = 0;
};

struct InvarianceReport {
  InvarianceSettings settings;
  std::string rng = std::string(kRngName);
  std::vector<TrialResult> trials;
  std::vector<std::uint64_t> pattern_counts;  // summed over used trials
  std::vector<double> pattern_expected;       // per used trial
  int used = 0;
  int excluded = 0;
  int passes = 0;
  double min_p = 1, max_p = 0;
  bool pass = false;
};

/// Samples eta on [-N, N), applies T_i with an empty carrier entering at the
/// left edge, and counts the patterns of non-overlapping length-w blocks of
/// T_i eta on [-N/2, N/2). A trial whose carrier never empties in one of the
/// margins is excluded. The test passes when at least `required_passes` used
/// trials have p-value above the threshold.
InvarianceReport invariance_test(const InvarianceSettings& settings);

/// Law with p_0 and p_color exchanged; used as a mis-specified null.
ColorLaw swapped_law(const ColorLaw& law, int color);

/// Pattern index of cells[k..k+w) in base kappa+1, first cell most
/// significant.
std::size_t pattern_index(std::span<const int> block, int kappa);

}  // namespace bbs
