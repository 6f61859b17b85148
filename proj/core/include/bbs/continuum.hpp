#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbs/lattice.hpp"
#include "bbs/pitman.hpp"
#include "bbs/rng.hpp"
#include "bbs/simplex.hpp"

namespace bbs {

/// Piecewise-linear path in R^kappa on the grid x_k = k h, k = -m..m.
/// values[k + m] is the value at x_k; the value at 0 is the zero vector.
struct SampledPath {
  int kappa = 1;
  double h = 0.01;
  std::int64_t m = 0;
  std::vector<Vec> values;

  double span() const noexcept { return static_cast<double>(m) * h; }
  double x(std::int64_t k) const noexcept { return static_cast<double>(k) * h; }
  const Vec& node(std::int64_t k) const { return values.at(static_cast<std::size_t>(k + m)); }
  /// Linear interpolation; OutOfWindowError outside [-m h, m h].
  Vec at(double x) const;
  /// Throws InvalidArgument if sizes or the zero anchor are off.
  void validate() const;
};

/// m = round(L / h); L must be a whole number of steps within 1e-9.
std::int64_t grid_steps(double L, double h);

/// A_i S_x = -2 (e_i - e_0).S_x / |e_i - e_0|^2 at x (interpolated).
double a_height_continuum(const SampledPath& path, const SimplexBasis& basis, int color, double x);

/// A_i S at every node.
std::vector<double> a_heights(const SampledPath& path, const SimplexBasis& basis, int color);

enum class ContinuumDirection { Forward, Inverse };

/// P_alpha on the nodes, with the running infimum taken over the window
/// (the part of the path outside [-L, L] is treated as absent).
SampledPath pitman_continuum(const SampledPath& path, std::span<const double> alpha,
                             ContinuumDirection direction);

/// T_i S_x = S_x + (A_i S_x - sup_{y<=x} A_i S_y + sup_{y<=0} A_i S_y)(e_i - e_0),
/// suprema over the window.
SampledPath apply_Ti_continuum(const SampledPath& path, const SimplexBasis& basis, int color);

/// The same map as tau_{(0,i)} o P_{e_i - e_0}.
SampledPath apply_Ti_continuum_tau(const SampledPath& path, const SimplexBasis& basis, int color);

/// T_i^{-1} = P^{-1}_{e_i - e_0} o tau_{(0,i)} on the window.
SampledPath apply_Ti_inverse_continuum(const SampledPath& path, const SimplexBasis& basis, int color);

/// T^{L'}_i with M^{L'}_x = A_i S_{-L'} for x < -L', sup_{[-L', x]} A_i S for
/// |x| <= L', sup_{[-L', L']} A_i S beyond.
SampledPath apply_Ti_truncated(const SampledPath& path, const SimplexBasis& basis, int color,
                               double Lprime);

/// sup_{[-L, -L']} A_i S <= A_i S_{-L''}: on [-L'', L''] the truncated map
/// then agrees with the window map.
bool truncation_agrees(const SampledPath& path, const SimplexBasis& basis, int color, double Lprime,
                       double Lsecond);

/// Max over nodes with |x| <= radius of |p - q|_inf.
double max_deviation(const SampledPath& p, const SampledPath& q, double radius);

/// max |T_i^{-1} T_i S - S| over nodes with |x| <= radius; a window check of
/// reversibility.
double reversibility_window_check(const SampledPath& path, const SimplexBasis& basis, int color,
                                  double radius);

/// D = sum c_j e_j with sum c_j = 0.
struct DriftSpec {
  int kappa = 1;
  std::vector<double> c;

  Vec drift(const SimplexBasis& basis) const;
  /// Throws InvalidArgument on size mismatch or sum c != 0.
  void validate() const;
};

/// c_0 > c_i for every colour. Also evaluates (e_i - e_0).D < 0 and throws
/// if the two forms disagree.
bool drift_admissible(const DriftSpec& spec, const SimplexBasis& basis);

/// Two-sided Brownian motion with drift on the grid of step h over [-L, L]:
/// S_x = B^1_x + x D for x >= 0 and S_{-x} = -(B^2_x + x D).
SampledPath sample_brownian_with_drift(const DriftSpec& spec, const SimplexBasis& basis, double L,
                                       double h, std::uint64_t seed);

/// X_x = sqrt(kappa/n) Y_{n x} for the two-sided walk with step law
/// p_j = 1/(kappa+1) + c_j/sqrt(n kappa). Nodes every `subsample`/n.
SampledPath donsker_rescale(const SimplexBasis& basis, std::span<const double> c, std::int64_t n,
                            double L, std::uint64_t seed, std::int64_t subsample = 1);

/// X_t for t > 0 alone, drawing the same right-hand steps as donsker_rescale
/// with the same seed.
Vec donsker_value(const SimplexBasis& basis, std::span<const double> c, std::int64_t n, double t,
                  std::uint64_t seed);

/// Embed a lattice path on the integer grid [-m, m] (m = max(-lo, hi)).
SampledPath embed_lattice(const PathEncoding& path, const SimplexBasis& basis, std::int64_t lo,
                          std::int64_t hi);

/// max over common nodes of |T_i(a S_{b .}) - a (T_i S)_{b .}|. The rescaled
/// path lives on the grid of step h / (b refine), filled by linear
/// interpolation; common nodes are the original ones.
double scaling_equivariance_check(const SampledPath& path, const SimplexBasis& basis, int color,
                                  double a, double b, int refine = 1);

/// A_i S_x / (-2 x (e_i - e_0).D / |e_i - e_0|^2).
double drift_height_ratio(const SampledPath& path, const SimplexBasis& basis, int color,
                          std::span<const double> drift, double x);

struct BmSettings {
  DriftSpec spec;
  double L = 50;
  double h = 0.01;
  double Lprime = 25;
  double Lsecond = 12.5;  // analysis radius; contamination is checked against it
  int seeds = 5000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double threshold = 0.035;
  double control_scale = 2.0;  // drift multiplier for the negative control
  double control_threshold = 0.1;
};

struct FunctionalResult {
  int color = 1;          // T_color
  std::string name;       // e.g. "S^1[0,1]" or "A_2[0,1]"
  double ks = 0;          // S vs T_i S
  double p_value = 1;
  double control_ks = 0;  // T_i S vs drift control_scale * D
  bool pass = false;
};

struct BmReport {
  BmSettings settings;
  std::string rng = std::string(kRngName);
  std::vector<FunctionalResult> functionals;
  std::vector<int> excluded;  // per colour, contaminated samples
  double max_ks = 0;
  double control_max_ks = 0;
  bool pass = false;          // every KS below threshold
  bool control_rejects = false;  // control KS above control_threshold
};

/// For each colour i, compares the unit increments over [0, 1] of every
/// component and of every A_j between independent samples of S and of
/// T^{L'}_i S (two-sample KS). Samples whose truncation check fails are
/// excluded.
BmReport bm_invariance_test(const BmSettings& settings);

}  // namespace bbs
