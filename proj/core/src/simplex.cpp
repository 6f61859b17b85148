#include "bbs/simplex.hpp"

#include <cmath>
#include <numeric>

#include "bbs/errors.hpp"

namespace bbs {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return dot(a, a); }

SimplexBasis::SimplexBasis(int kappa, std::vector<Vec> vectors)
    : kappa_(kappa), vectors_(std::move(vectors)) {
  if (kappa_ < 1) throw InvalidArgument("simplex", "kappa must be >= 1");
  if (vectors_.size() != static_cast<std::size_t>(kappa_) + 1)
    throw InvalidArgument("simplex", "basis needs kappa+1 vectors");
  for (const auto& v : vectors_)
    if (v.size() != static_cast<std::size_t>(kappa_))
      throw InvalidArgument("simplex", "basis vectors must live in R^kappa");
}

Vec SimplexBasis::root(int i) const {
  Vec r(static_cast<std::size_t>(kappa_));
  const auto& ei = vectors_.at(static_cast<std::size_t>(i));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = ei[k] - vectors_[0][k];
  return r;
}

Vec SimplexBasis::combine(std::span<const double> coefficients) const {
  Vec out(static_cast<std::size_t>(kappa_), 0.0);
  for (std::size_t j = 0; j < vectors_.size(); ++j)
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] += coefficients[j] * vectors_[j][k];
  return out;
}

SimplexBasis build_simplex_basis(int kappa) {
  if (kappa < 1) throw InvalidArgument("simplex", "kappa must be >= 1");
  const std::size_t dim = static_cast<std::size_t>(kappa) + 1;
  const double inv = 1.0 / static_cast<double>(dim);

  // Orthonormal basis of {x in R^(kappa+1) : sum x = 0} by Gram-Schmidt on
  // delta_k - 1/(kappa+1), k = 0..kappa-1.
  std::vector<Vec> frame;
  frame.reserve(static_cast<std::size_t>(kappa));
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    Vec seed(dim, -inv);
    seed[k] += 1.0;
    for (const auto& f : frame) {
      const double c = dot(seed, f);
      for (std::size_t m = 0; m < dim; ++m) seed[m] -= c * f[m];
    }
    const double n = std::sqrt(norm2(seed));
    for (auto& x : seed) x /= n;
    frame.push_back(std::move(seed));
  }

  const double scale = std::sqrt(static_cast<double>(dim) / kappa);
  std::vector<Vec> vectors;
  vectors.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Vec lifted(dim, -inv * scale);
    lifted[i] += scale;
    Vec e(static_cast<std::size_t>(kappa));
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = dot(lifted, frame[k]);
    vectors.push_back(std::move(e));
  }
  return SimplexBasis(kappa, std::move(vectors));
}

double gram_report(const SimplexBasis& basis) {
  const double off = -1.0 / basis.kappa();
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double target = i == j ? 1.0 : off;
      worst = std::max(worst, std::abs(dot(basis[i], basis[j]) - target));
    }
  return worst;
}

Vec decompose(std::span<const double> v, const SimplexBasis& basis) {
  if (v.size() != static_cast<std::size_t>(basis.kappa()))
    throw InvalidArgument("simplex", "vector dimension does not match kappa");
  const double k = basis.kappa();
  Vec a(basis.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = k / (k + 1.0) * dot(basis[j], v);
  // Remove rounding drift so the zero-sum constraint holds to the last bit
  // that double arithmetic allows.
  const double mean =
      std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  for (auto& x : a) x -= mean;
  return a;
}

}  // namespace bbs
