#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bbs {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Vertices e_0, ..., e_kappa of a regular simplex centred at the origin of
/// R^kappa: unit length, pairwise dot product -1/kappa.
///
/// The vertices are produced by embedding scaled centred indicator vectors of
/// R^(kappa+1) and expressing them in a fixed orthonormal basis of the
/// zero-sum hyperplane. The first coordinate axis is aligned with e_0, so for
/// kappa = 1 the basis is e_0 = +1, e_1 = -1.
class SimplexBasis {
 public:
  SimplexBasis(int kappa, std::vector<Vec> vectors);

  int kappa() const noexcept { return kappa_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const Vec& operator[](std::size_t i) const { return vectors_.at(i); }
  const std::vector<Vec>& vectors() const noexcept { return vectors_; }

  /// e_i - e_0.
  Vec root(int i) const;

  /// Sum_j counts[j] * e_j.
  Vec combine(std::span<const double> coefficients) const;

 private:
  int kappa_;
  std::vector<Vec> vectors_;
};

SimplexBasis build_simplex_basis(int kappa);

/// Max |G_ij - target_ij| where target is 1 on the diagonal and -1/kappa off it.
double gram_report(const SimplexBasis& basis);

/// Coefficients a_0..a_kappa with sum zero and Sum a_i e_i = v.
///
/// Using the Gram structure, e_j . v = a_j - (1/kappa) Sum_{l != j} a_l
/// = a_j (kappa+1)/kappa once Sum a_l = 0, so a_j = kappa/(kappa+1) e_j . v.
Vec decompose(std::span<const double> v, const SimplexBasis& basis);

}  // namespace bbs
