#include "bbs/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bbs/errors.hpp"
#include "bbs/random.hpp"
#include "bbs/stats.hpp"

namespace bbs {

namespace {

void check_color(int kappa, int color) {
  if (color < 1 || color > kappa) throw InvalidArgument("continuum", "colour must be in {1..kappa}");
}

Vec root(const SimplexBasis& basis, int color) { return basis.root(color); }

SampledPath shifted_along(const SampledPath& path, const Vec& alpha, const std::vector<double>& shift) {
  SampledPath out = path;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    for (std::size_t d = 0; d < alpha.size(); ++d) out.values[k][d] += shift[k] * alpha[d];
  return out;
}

int draw_symbol(const std::vector<double>& cum, Rng& rng) {
  const double u = uniform01(rng);
  int j = 0;
  while (u >= cum[static_cast<std::size_t>(j)]) ++j;
  return j;
}

std::vector<double> cumulative(const ColorLaw& law) {
  std::vector<double> cum(law.probs.size());
  std::partial_sum(law.probs.begin(), law.probs.end(), cum.begin());
  cum.back() = 1.0;
  return cum;
}

}  // namespace

Vec SampledPath::at(double x) const {
  const double pos = x / h;
  if (pos < -static_cast<double>(m) - 1e-9 || pos > static_cast<double>(m) + 1e-9)
    throw OutOfWindowError("continuum", "x outside the sampled span");
  auto k0 = static_cast<std::int64_t>(std::floor(pos));
  k0 = std::clamp<std::int64_t>(k0, -m, m);
  const double t = std::clamp(pos - static_cast<double>(k0), 0.0, 1.0);
  if (k0 == m || t == 0.0) return node(k0);
  const Vec& a = node(k0);
  const Vec& b = node(k0 + 1);
  Vec v(a.size());
  for (std::size_t d = 0; d < v.size(); ++d) v[d] = a[d] + t * (b[d] - a[d]);
  return v;
}

void SampledPath::validate() const {
  if (kappa < 1 || !(h > 0) || m < 0) throw InvalidArgument("continuum", "bad grid");
  if (values.size() != static_cast<std::size_t>(2 * m + 1))
    throw InvalidArgument("continuum", "values do not match the grid");
  for (const auto& v : values)
    if (v.size() != static_cast<std::size_t>(kappa)) throw InvalidArgument("continuum", "wrong dimension");
  for (double c : node(0))
    if (c != 0.0) throw InvalidArgument("continuum", "path must vanish at 0");
}

std::int64_t grid_steps(double L, double h) {
  if (!(h > 0) || !(L >= 0)) throw InvalidArgument("continuum", "need h > 0 and L >= 0");
  const double r = L / h;
  const auto m = static_cast<std::int64_t>(std::llround(r));
  if (std::abs(r - static_cast<double>(m)) > 1e-9 * std::max(1.0, r))
    throw InvalidArgument("continuum", "L is not a whole number of grid steps");
  return m;
}

double a_height_continuum(const SampledPath& path, const SimplexBasis& basis, int color, double x) {
  check_color(basis.kappa(), color);
  const Vec r = root(basis, color);
  return -2.0 * dot(r, path.at(x)) / norm2(r);
}

std::vector<double> a_heights(const SampledPath& path, const SimplexBasis& basis, int color) {
  check_color(basis.kappa(), color);
  const Vec r = root(basis, color);
  const double r2 = norm2(r);
  std::vector<double> a(path.values.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = -2.0 * dot(r, path.values[k]) / r2;
  return a;
}

SampledPath pitman_continuum(const SampledPath& path, std::span<const double> alpha,
                             ContinuumDirection direction) {
  VectorPath v;
  v.lo = -path.m;
  v.values = path.values;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (direction == ContinuumDirection::Forward) {
    v.left = VectorTail::open(inf);
    v.right = VectorTail::open();
  } else {
    v.left = VectorTail::open();
    v.right = VectorTail::open(inf);
  }
  const VectorPath out = pitman_alpha(
      v, alpha, direction == ContinuumDirection::Forward ? PitmanDirection::Forward : PitmanDirection::Inverse);
  SampledPath s = path;
  s.values = out.values;
  return s;
}

SampledPath apply_Ti_continuum(const SampledPath& path, const SimplexBasis& basis, int color) {
  const std::vector<double> a = a_heights(path, basis, color);
  std::vector<double> sup(a.size());
  double s = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.size(); ++k) sup[k] = s = std::max(s, a[k]);
  const double sup0 = sup[static_cast<std::size_t>(path.m)];
  std::vector<double> shift(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) shift[k] = a[k] - sup[k] + sup0;
  return shifted_along(path, root(basis, color), shift);
}

SampledPath apply_Ti_continuum_tau(const SampledPath& path, const SimplexBasis& basis, int color) {
  check_color(basis.kappa(), color);
  SampledPath p = pitman_continuum(path, root(basis, color), ContinuumDirection::Forward);
  for (auto& v : p.values) v = tau(v, basis, 0, color);
  return p;
}

SampledPath apply_Ti_inverse_continuum(const SampledPath& path, const SimplexBasis& basis, int color) {
  check_color(basis.kappa(), color);
  SampledPath p = path;
  for (auto& v : p.values) v = tau(v, basis, 0, color);
  return pitman_continuum(p, root(basis, color), ContinuumDirection::Inverse);
}

SampledPath apply_Ti_truncated(const SampledPath& path, const SimplexBasis& basis, int color,
                               double Lprime) {
  if (!(Lprime >= 0) || Lprime > path.span() * (1 + 1e-12))
    throw InvalidArgument("continuum", "need 0 <= L' <= L");
  const std::vector<double> a = a_heights(path, basis, color);
  const double a_left = a_height_continuum(path, basis, color, -Lprime);
  const double a_right = a_height_continuum(path, basis, color, Lprime);
  const double eps = 1e-12 * std::max(1.0, Lprime);
  std::vector<double> M(a.size());
  double running = a_left;
  for (std::int64_t k = -path.m; k <= path.m; ++k) {
    const double x = path.x(k);
    const auto idx = static_cast<std::size_t>(k + path.m);
    if (x < -Lprime - eps) {
      M[idx] = a_left;
    } else if (x <= Lprime + eps) {
      running = std::max(running, a[idx]);
      M[idx] = running;
    } else {
      M[idx] = std::max(running, a_right);
    }
  }
  const double m0 = M[static_cast<std::size_t>(path.m)];
  std::vector<double> shift(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) shift[k] = a[k] - M[k] + m0;
  return shifted_along(path, root(basis, color), shift);
}

bool truncation_agrees(const SampledPath& path, const SimplexBasis& basis, int color, double Lprime,
                       double Lsecond) {
  if (Lsecond > Lprime) throw InvalidArgument("continuum", "need L'' <= L'");
  const std::vector<double> a = a_heights(path, basis, color);
  double sup = a_height_continuum(path, basis, color, -Lprime);
  for (std::int64_t k = -path.m; k <= path.m && path.x(k) <= -Lprime; ++k)
    sup = std::max(sup, a[static_cast<std::size_t>(k + path.m)]);
  return sup <= a_height_continuum(path, basis, color, -Lsecond);
}

double max_deviation(const SampledPath& p, const SampledPath& q, double radius) {
  if (p.m != q.m || p.h != q.h) throw InvalidArgument("continuum", "paths on different grids");
  double worst = 0;
  for (std::int64_t k = -p.m; k <= p.m; ++k) {
    if (std::abs(p.x(k)) > radius + 1e-12) continue;
    const Vec& a = p.node(k);
    const Vec& b = q.node(k);
    for (std::size_t d = 0; d < a.size(); ++d) worst = std::max(worst, std::abs(a[d] - b[d]));
  }
  return worst;
}

double reversibility_window_check(const SampledPath& path, const SimplexBasis& basis, int color,
                                  double radius) {
  const SampledPath back =
      apply_Ti_inverse_continuum(apply_Ti_continuum(path, basis, color), basis, color);
  return max_deviation(back, path, radius);
}

Vec DriftSpec::drift(const SimplexBasis& basis) const {
  validate();
  if (basis.kappa() != kappa) throw InvalidArgument("continuum", "basis kappa mismatch");
  return basis.combine(c);
}

void DriftSpec::validate() const {
  if (kappa < 1) throw InvalidArgument("continuum", "kappa must be >= 1");
  if (c.size() != static_cast<std::size_t>(kappa) + 1)
    throw InvalidArgument("continuum", "need kappa+1 coefficients c_0..c_kappa");
  if (std::abs(std::accumulate(c.begin(), c.end(), 0.0)) > 1e-12)
    throw InvalidArgument("continuum", "coefficients must sum to 0");
}

bool drift_admissible(const DriftSpec& spec, const SimplexBasis& basis) {
  const Vec D = spec.drift(basis);
  bool by_c = true, by_geometry = true;
  for (int i = 1; i <= spec.kappa; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!(spec.c[0] > spec.c[ui])) by_c = false;
    const Vec r = basis.root(i);
    const double proj = dot(r, D);
    const double expected = (spec.c[ui] - spec.c[0]) * norm2(r) / 2.0;
    if (std::abs(proj - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw Error("continuum", "drift projection disagrees with (c_i - c_0)|e_i - e_0|^2 / 2");
    if (!(proj < 0)) by_geometry = false;
  }
  if (by_c != by_geometry) throw Error("continuum", "admissibility forms disagree");
  return by_c;
}

SampledPath sample_brownian_with_drift(const DriftSpec& spec, const SimplexBasis& basis, double L,
                                       double h, std::uint64_t seed) {
  if (!drift_admissible(spec, basis)) throw InvalidArgument("continuum", "inadmissible drift: need c_0 > c_i");
  const Vec D = spec.drift(basis);
  SampledPath p;
  p.kappa = spec.kappa;
  p.h = h;
  p.m = grid_steps(L, h);
  const auto k = static_cast<std::size_t>(spec.kappa);
  p.values.assign(static_cast<std::size_t>(2 * p.m + 1), Vec(k, 0.0));
  const double sh = std::sqrt(h);
  Rng right = make_rng(seed, 0), left = make_rng(seed, 1);
  for (std::int64_t j = 1; j <= p.m; ++j) {
    const Vec& prev = p.values[static_cast<std::size_t>(p.m + j - 1)];
    Vec& cur = p.values[static_cast<std::size_t>(p.m + j)];
    for (std::size_t d = 0; d < k; ++d) cur[d] = prev[d] + sh * standard_normal(right) + h * D[d];
  }
  for (std::int64_t j = 1; j <= p.m; ++j) {
    const Vec& prev = p.values[static_cast<std::size_t>(p.m - j + 1)];
    Vec& cur = p.values[static_cast<std::size_t>(p.m - j)];
    for (std::size_t d = 0; d < k; ++d) cur[d] = prev[d] - (sh * standard_normal(left) + h * D[d]);
  }
  return p;
}

SampledPath donsker_rescale(const SimplexBasis& basis, std::span<const double> c, std::int64_t n,
                            double L, std::uint64_t seed, std::int64_t subsample) {
  if (n < 1 || subsample < 1) throw InvalidArgument("continuum", "need n >= 1 and subsample >= 1");
  const int kappa = basis.kappa();
  const std::vector<double> cum = cumulative(near_critical_law(kappa, c, static_cast<double>(n)));
  SampledPath p;
  p.kappa = kappa;
  p.h = static_cast<double>(subsample) / static_cast<double>(n);
  p.m = static_cast<std::int64_t>(std::floor(L * static_cast<double>(n) / static_cast<double>(subsample) + 1e-9));
  const auto k = static_cast<std::size_t>(kappa);
  p.values.assign(static_cast<std::size_t>(2 * p.m + 1), Vec(k, 0.0));
  const double scale = std::sqrt(static_cast<double>(kappa) / static_cast<double>(n));
  for (int side = 0; side < 2; ++side) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(side));
    const double sign = side == 0 ? 1.0 : -1.0;
    std::vector<std::int64_t> counts(k + 1, 0);
    for (std::int64_t j = 1; j <= p.m; ++j) {
      for (std::int64_t s = 0; s < subsample; ++s) ++counts[static_cast<std::size_t>(draw_symbol(cum, rng))];
      std::vector<double> coeff(counts.begin(), counts.end());
      Vec v = basis.combine(coeff);
      for (double& x : v) x *= sign * scale;
      p.values[static_cast<std::size_t>(p.m + (side == 0 ? j : -j))] = std::move(v);
    }
  }
  return p;
}

Vec donsker_value(const SimplexBasis& basis, std::span<const double> c, std::int64_t n, double t,
                  std::uint64_t seed) {
  if (n < 1 || !(t >= 0)) throw InvalidArgument("continuum", "need n >= 1 and t >= 0");
  const int kappa = basis.kappa();
  const std::vector<double> cum = cumulative(near_critical_law(kappa, c, static_cast<double>(n)));
  const double nt = t * static_cast<double>(n);
  const auto whole = static_cast<std::int64_t>(std::floor(nt + 1e-9));
  const double frac = std::max(0.0, nt - static_cast<double>(whole));
  Rng rng = make_rng(seed, 0);
  std::vector<double> coeff(static_cast<std::size_t>(kappa) + 1, 0.0);
  for (std::int64_t j = 0; j < whole; ++j) coeff[static_cast<std::size_t>(draw_symbol(cum, rng))] += 1.0;
  if (frac > 1e-9) coeff[static_cast<std::size_t>(draw_symbol(cum, rng))] += frac;
  Vec v = basis.combine(coeff);
  const double scale = std::sqrt(static_cast<double>(kappa) / static_cast<double>(n));
  for (double& x : v) x *= scale;
  return v;
}

SampledPath embed_lattice(const PathEncoding& path, const SimplexBasis& basis, std::int64_t lo,
                          std::int64_t hi) {
  if (lo > 0 || hi < 0) throw InvalidArgument("continuum", "embedding range must contain 0");
  SampledPath p;
  p.kappa = path.kappa;
  p.h = 1.0;
  p.m = std::max(-lo, hi);
  for (std::int64_t n = -p.m; n <= p.m; ++n) p.values.push_back(path_point(path, basis, n));
  return p;
}

double scaling_equivariance_check(const SampledPath& path, const SimplexBasis& basis, int color,
                                  double a, double b, int refine) {
  if (!(a > 0) || !(b > 0) || refine < 1) throw InvalidArgument("continuum", "need a, b > 0 and refine >= 1");
  SampledPath scaled;
  scaled.kappa = path.kappa;
  scaled.h = path.h / (b * refine);
  scaled.m = path.m * refine;
  scaled.values.resize(static_cast<std::size_t>(2 * scaled.m + 1));
  for (std::int64_t k = -scaled.m; k <= scaled.m; ++k) {
    // a S_{b x} at x = k h / (b refine), i.e. S at node k / refine.
    const std::int64_t q = k >= 0 ? k / refine : -((-k + refine - 1) / refine);
    const std::int64_t r = k - q * refine;
    const Vec& lo = path.node(q);
    Vec v = lo;
    if (r != 0) {
      const Vec& hi = path.node(q + 1);
      const double t = static_cast<double>(r) / refine;
      for (std::size_t d = 0; d < v.size(); ++d) v[d] = lo[d] + t * (hi[d] - lo[d]);
    }
    for (double& x : v) x *= a;
    scaled.values[static_cast<std::size_t>(k + scaled.m)] = std::move(v);
  }
  const SampledPath lhs = apply_Ti_continuum(scaled, basis, color);
  const SampledPath rhs = apply_Ti_continuum(path, basis, color);
  double worst = 0;
  for (std::int64_t k = -path.m; k <= path.m; ++k) {
    const Vec& l = lhs.node(k * refine);
    const Vec& r = rhs.node(k);
    for (std::size_t d = 0; d < l.size(); ++d) worst = std::max(worst, std::abs(l[d] - a * r[d]));
  }
  return worst;
}

double drift_height_ratio(const SampledPath& path, const SimplexBasis& basis, int color,
                          std::span<const double> drift, double x) {
  const Vec r = basis.root(color);
  const double f = -2.0 * x * dot(r, drift) / norm2(r);
  return a_height_continuum(path, basis, color, x) / f;
}

BmReport bm_invariance_test(const BmSettings& settings) {
  const SimplexBasis basis = build_simplex_basis(settings.spec.kappa);
  if (!drift_admissible(settings.spec, basis))
    throw InvalidArgument("continuum", "inadmissible drift: need c_0 > c_i");
  if (settings.seeds < 2) throw InvalidArgument("continuum", "need at least two seeds");
  if (!(settings.Lsecond >= 1.0)) throw InvalidArgument("continuum", "analysis radius must be at least 1");
  const int kappa = settings.spec.kappa;
  const auto seeds = static_cast<std::size_t>(settings.seeds);
  const std::int64_t one = grid_steps(1.0, settings.h);
  const std::size_t nf = 2 * static_cast<std::size_t>(kappa);

  // f[q] for q < kappa: component q increment over [0,1]; then A_{q-kappa+1}.
  auto functionals = [&](const SampledPath& p) {
    std::vector<double> f(nf);
    const Vec& s0 = p.node(0);
    const Vec& s1 = p.node(one);
    for (int q = 0; q < kappa; ++q) f[static_cast<std::size_t>(q)] = s1[static_cast<std::size_t>(q)] - s0[static_cast<std::size_t>(q)];
    for (int j = 1; j <= kappa; ++j) {
      const Vec r = basis.root(j);
      const double r2 = norm2(r);
      f[static_cast<std::size_t>(kappa + j - 1)] = -2.0 * (dot(r, s1) - dot(r, s0)) / r2;
    }
    return f;
  };

  auto sample_set = [&](const DriftSpec& spec, std::uint64_t stream, int color, std::vector<int>& ok) {
    std::vector<std::vector<double>> out(seeds);
    ok.assign(seeds, 1);
    const std::uint64_t base = derive_seed(settings.seed, stream);
    parallel_for(seeds, settings.threads, [&](std::size_t s) {
      SampledPath p = sample_brownian_with_drift(spec, basis, settings.L, settings.h, derive_seed(base, s));
      if (color > 0) {
        if (!truncation_agrees(p, basis, color, settings.Lprime, settings.Lsecond)) ok[s] = 0;
        p = apply_Ti_truncated(p, basis, color, settings.Lprime);
      }
      out[s] = functionals(p);
    });
    return out;
  };
  auto column = [&](const std::vector<std::vector<double>>& rows, const std::vector<int>& ok, std::size_t q) {
    std::vector<double> c;
    c.reserve(rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s)
      if (ok[s]) c.push_back(rows[s][q]);
    return c;
  };

  BmReport rep;
  rep.settings = settings;
  std::vector<int> ref_ok, ctl_ok;
  const auto ref = sample_set(settings.spec, 0, 0, ref_ok);
  DriftSpec control = settings.spec;
  for (double& x : control.c) x *= settings.control_scale;
  const auto ctl = sample_set(control, 1, 0, ctl_ok);

  rep.pass = true;
  for (int i = 1; i <= kappa; ++i) {
    std::vector<int> ok;
    const auto moved = sample_set(settings.spec, 100 + static_cast<std::uint64_t>(i), i, ok);
    rep.excluded.push_back(static_cast<int>(std::count(ok.begin(), ok.end(), 0)));
    for (std::size_t q = 0; q < nf; ++q) {
      FunctionalResult fr;
      fr.color = i;
      fr.name = q < static_cast<std::size_t>(kappa)
                    ? "S^" + std::to_string(q + 1) + "[0,1]"
                    : "A_" + std::to_string(q - static_cast<std::size_t>(kappa) + 1) + "[0,1]";
      const auto m = column(moved, ok, q);
      const KsResult ks = ks_two_sample(column(ref, ref_ok, q), m);
      fr.ks = ks.distance;
      fr.p_value = ks.p_value;
      fr.control_ks = ks_two_sample(column(ctl, ctl_ok, q), m).distance;
      fr.pass = fr.ks < settings.threshold;
      rep.pass = rep.pass && fr.pass;
      rep.max_ks = std::max(rep.max_ks, fr.ks);
      rep.control_max_ks = std::max(rep.control_max_ks, fr.control_ks);
      rep.functionals.push_back(fr);
    }
  }
  rep.control_rejects = rep.control_max_ks > settings.control_threshold;
  return rep;
}

}  // namespace bbs
