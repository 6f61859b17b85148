#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bbs/simplex.hpp"

namespace bbs {

/// Three-valued answer for membership questions that may depend on data
/// outside a finite window.
enum class Decision { Yes, No, Undecidable };
std::string_view to_string(Decision d);

/// Description of a path beyond one end of its stored window.
///
/// Linear: the path continues with a constant increment `slope` per step
/// (measured left to right on both sides). Open: nothing is known except,
/// optionally, the infimum of the path over the tail.
struct Tail {
  bool linear = false;
  double slope = 0.0;
  std::optional<double> inf;

  static Tail with_slope(double s) { return Tail{true, s, std::nullopt}; }
  static Tail open(std::optional<double> inf = std::nullopt) { return Tail{false, 0.0, inf}; }
};

/// pi(n) for n in [lo, lo + values.size() - 1], with pi(0) = 0 when 0 is in
/// the window.
struct ScalarPath {
  std::int64_t lo = 0;
  std::vector<double> values;
  Tail left = Tail::with_slope(0.0);
  Tail right = Tail::with_slope(0.0);

  std::int64_t hi() const noexcept { return lo + static_cast<std::int64_t>(values.size()) - 1; }
  bool contains(std::int64_t n) const noexcept { return n >= lo && n <= hi(); }

  /// Value at n, extended through linear tails; OutOfWindowError on an
  /// open tail.
  double at(std::int64_t n) const;
};

/// Vector-valued counterpart. Tail steps are per-step increments; an open
/// tail's `inf` is the infimum of the projection being transformed.
struct VectorTail {
  bool linear = false;
  Vec step;
  std::optional<double> inf;

  static VectorTail with_step(Vec s) { return VectorTail{true, std::move(s), std::nullopt}; }
  static VectorTail open(std::optional<double> inf = std::nullopt) {
    return VectorTail{false, {}, inf};
  }
};

struct VectorPath {
  std::int64_t lo = 0;
  std::vector<Vec> values;
  VectorTail left;
  VectorTail right;

  std::int64_t hi() const noexcept { return lo + static_cast<std::int64_t>(values.size()) - 1; }
  std::size_t dim() const noexcept { return values.empty() ? 0 : values.front().size(); }
  Vec at(std::int64_t n) const;
};

/// Tolerance for comparisons between real path values. Integer inputs are
/// compared exactly in practice since they are represented exactly.
inline constexpr double kPathTolerance = 1e-12;

/// P_1 pi(n) = pi(n) - 2 min_{0<=m<=n} pi(m) on Z_+. The window must start
/// at 0. The left tail is ignored and returned open.
ScalarPath pitman_one_sided(const ScalarPath& pi);

/// P_1 pi(n) = pi(n) - 2 inf_{m<=n} pi(m) + 2 inf_{m<=0} pi(m).
///
/// The window must contain 0. A linear left tail with positive slope has
/// infinite infimum (DomainError); an open left tail without a known infimum
/// raises UndecidableError. A falling linear right tail is extended until the
/// running infimum is attained, so the output window can be longer.
ScalarPath pitman_two_sided(const ScalarPath& pi);

/// P_1^{-1} pi(n) = pi(n) - 2 inf_{m>=n} pi(m) + 2 inf_{m>=0} pi(m), computed
/// as reflect o P_1 o reflect.
ScalarPath pitman_inverse(const ScalarPath& pi);

/// n -> pi(-n).
ScalarPath reflect(const ScalarPath& pi);

enum class PitmanDomain { R_P1, R_P1inv, R_P1invP1, R_P1P1inv };

/// Membership test. The step condition reads |pi(n+1) - pi(n)| in {0, c}.
/// For linear tails the recurrence condition
///   inf_{m<=n} pi(m) = pi(n) infinitely often as n -> +inf
/// holds when the right slope is negative, holds for slope zero exactly when
/// pi(hi) already equals the running infimum, and fails for a positive slope.
/// Open tails make it undecidable.
Decision in_domain(const ScalarPath& pi, PitmanDomain which, double c = 1.0);

enum class PitmanDirection { Forward, Inverse, OneSided };

/// P_alpha pi = (P_1 pi_alpha) alpha + (pi - pi_alpha alpha) with
/// pi_alpha = alpha . pi / |alpha|^2.
VectorPath pitman_alpha(const VectorPath& pi, std::span<const double> alpha,
                        PitmanDirection direction);

/// pi_alpha as a scalar path (tails carried over).
ScalarPath project(const VectorPath& pi, std::span<const double> alpha);

/// Reflection across the hyperplane orthogonal to (e_k - e_j); swaps the
/// simplex vectors e_j and e_k.
Vec tau(std::span<const double> v, const SimplexBasis& basis, int j, int k);

}  // namespace bbs
