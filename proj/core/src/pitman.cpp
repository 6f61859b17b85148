#include "bbs/pitman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbs/errors.hpp"

namespace bbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_window(const ScalarPath& pi) {
  if (pi.values.empty()) throw InvalidArgument("pitman", "empty path");
  if (!pi.contains(0)) throw InvalidArgument("pitman", "window must contain index 0");
}

// inf over the sites strictly left of the window.
double left_tail_inf(const ScalarPath& pi) {
  if (pi.left.linear) {
    if (pi.left.slope > kPathTolerance)
      throw DomainError("pitman", "inf over the left tail is -infinity", pi.lo);
    return pi.values.front() - pi.left.slope;
  }
  if (!pi.left.inf)
    throw UndecidableError("pitman", "left-tail infimum unknown outside the window", pi.lo);
  return *pi.left.inf;
}

// Shared kernel: out(n) = pi(n) - 2 J(n) + 2 J(anchor) where J(n) is the
// running infimum seeded with `seed` at the left edge.
ScalarPath reflect_kernel(const ScalarPath& pi, double seed) {
  std::vector<double> v = pi.values;
  double j_hi = seed;
  for (double x : v) j_hi = std::min(j_hi, x);

  std::size_t extra = 0;
  if (pi.right.linear && pi.right.slope < -kPathTolerance && v.back() > j_hi) {
    extra = static_cast<std::size_t>(std::ceil((v.back() - j_hi) / -pi.right.slope - kPathTolerance));
    const double base = v.back();
    for (std::size_t t = 1; t <= extra; ++t) v.push_back(base + pi.right.slope * static_cast<double>(t));
  }

  ScalarPath out;
  out.lo = pi.lo;
  out.values.resize(v.size());
  std::vector<double> running(v.size());
  double j = seed;
  for (std::size_t k = 0; k < v.size(); ++k) {
    j = std::min(j, v[k]);
    running[k] = j;
  }
  const double j0 = running[static_cast<std::size_t>(-pi.lo)];
  for (std::size_t k = 0; k < v.size(); ++k) out.values[k] = v[k] - 2.0 * running[k] + 2.0 * j0;

  if (pi.left.linear)
    out.left = Tail::with_slope(-pi.left.slope);
  else
    out.left = Tail::open();
  if (pi.right.linear)
    out.right = Tail::with_slope(pi.right.slope >= 0 ? pi.right.slope : -pi.right.slope);
  else
    out.right = Tail::open();
  return out;
}

bool steps_ok(const ScalarPath& pi, double c) {
  auto ok = [c](double d) {
    d = std::abs(d);
    return d <= kPathTolerance || std::abs(d - c) <= kPathTolerance;
  };
  for (std::size_t k = 1; k < pi.values.size(); ++k)
    if (!ok(pi.values[k] - pi.values[k - 1])) return false;
  if (pi.left.linear && !ok(pi.left.slope)) return false;
  if (pi.right.linear && !ok(pi.right.slope)) return false;
  return true;
}

Decision left_inf_finite(const ScalarPath& pi) {
  if (pi.left.linear) return pi.left.slope <= kPathTolerance ? Decision::Yes : Decision::No;
  return pi.left.inf ? Decision::Yes : Decision::Undecidable;
}

Decision recurrent_running_inf(const ScalarPath& pi) {
  if (!pi.right.linear) return Decision::Undecidable;
  if (pi.right.slope < -kPathTolerance) return Decision::Yes;
  if (pi.right.slope > kPathTolerance) return Decision::No;
  // Flat right tail: equality recurs iff it already holds at hi.
  double j = left_tail_inf(pi);
  for (double x : pi.values) j = std::min(j, x);
  return pi.values.back() <= j + kPathTolerance ? Decision::Yes : Decision::No;
}

}  // namespace

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Yes: return "yes";
    case Decision::No: return "no";
    case Decision::Undecidable: return "undecidable";
  }
  return "?";
}

double ScalarPath::at(std::int64_t n) const {
  if (values.empty()) throw OutOfWindowError("pitman", "empty path", n);
  if (contains(n)) return values[static_cast<std::size_t>(n - lo)];
  const Tail& t = n < lo ? left : right;
  if (!t.linear) throw OutOfWindowError("pitman", "index outside window with open tail", n);
  const std::int64_t edge = n < lo ? lo : hi();
  return values[static_cast<std::size_t>(edge - lo)] + t.slope * static_cast<double>(n - edge);
}

Vec VectorPath::at(std::int64_t n) const {
  if (values.empty()) throw OutOfWindowError("pitman", "empty path", n);
  if (n >= lo && n <= hi()) return values[static_cast<std::size_t>(n - lo)];
  const VectorTail& t = n < lo ? left : right;
  if (!t.linear) throw OutOfWindowError("pitman", "index outside window with open tail", n);
  const std::int64_t edge = n < lo ? lo : hi();
  Vec v = values[static_cast<std::size_t>(edge - lo)];
  const double k = static_cast<double>(n - edge);
  for (std::size_t d = 0; d < v.size(); ++d) v[d] += t.step[d] * k;
  return v;
}

ScalarPath pitman_one_sided(const ScalarPath& pi) {
  if (pi.values.empty() || pi.lo != 0)
    throw InvalidArgument("pitman", "one-sided transform needs a window starting at 0");
  ScalarPath p = pi;
  p.left = Tail::open(kInf);
  ScalarPath out = reflect_kernel(p, kInf);
  out.left = Tail::open();
  return out;
}

ScalarPath pitman_two_sided(const ScalarPath& pi) {
  check_window(pi);
  return reflect_kernel(pi, left_tail_inf(pi));
}

ScalarPath reflect(const ScalarPath& pi) {
  ScalarPath out;
  out.lo = -pi.hi();
  out.values.assign(pi.values.rbegin(), pi.values.rend());
  auto flip = [](const Tail& t) {
    return t.linear ? Tail::with_slope(-t.slope) : Tail::open(t.inf);
  };
  out.left = flip(pi.right);
  out.right = flip(pi.left);
  return out;
}

ScalarPath pitman_inverse(const ScalarPath& pi) {
  check_window(pi);
  try {
    return reflect(pitman_two_sided(reflect(pi)));
  } catch (const UndecidableError&) {
    throw UndecidableError("pitman", "right-tail infimum unknown outside the window", pi.hi());
  } catch (const DomainError&) {
    throw DomainError("pitman", "inf over the right tail is -infinity", pi.hi());
  }
}

Decision in_domain(const ScalarPath& pi, PitmanDomain which, double c) {
  check_window(pi);
  switch (which) {
    case PitmanDomain::R_P1:
      return left_inf_finite(pi);
    case PitmanDomain::R_P1inv:
      return left_inf_finite(reflect(pi));
    case PitmanDomain::R_P1invP1: {
      if (!steps_ok(pi, c)) return Decision::No;
      const Decision base = left_inf_finite(pi);
      if (base != Decision::Yes) return base;
      return recurrent_running_inf(pi);
    }
    case PitmanDomain::R_P1P1inv:
      return in_domain(reflect(pi), PitmanDomain::R_P1invP1, c);
  }
  return Decision::Undecidable;
}

ScalarPath project(const VectorPath& pi, std::span<const double> alpha) {
  const double a2 = norm2(alpha);
  if (!(a2 > 0)) throw InvalidArgument("pitman", "alpha must be nonzero");
  ScalarPath s;
  s.lo = pi.lo;
  s.values.reserve(pi.values.size());
  for (const auto& v : pi.values) {
    if (v.size() != alpha.size()) throw InvalidArgument("pitman", "dimension mismatch");
    s.values.push_back(dot(alpha, v) / a2);
  }
  auto proj = [&](const VectorTail& t) {
    return t.linear ? Tail::with_slope(dot(alpha, t.step) / a2) : Tail::open(t.inf);
  };
  s.left = proj(pi.left);
  s.right = proj(pi.right);
  return s;
}

VectorPath pitman_alpha(const VectorPath& pi, std::span<const double> alpha,
                        PitmanDirection direction) {
  const ScalarPath s = project(pi, alpha);
  ScalarPath t;
  switch (direction) {
    case PitmanDirection::Forward: t = pitman_two_sided(s); break;
    case PitmanDirection::Inverse: t = pitman_inverse(s); break;
    case PitmanDirection::OneSided: t = pitman_one_sided(s); break;
  }

  VectorPath out;
  out.lo = t.lo;
  out.values.reserve(t.values.size());
  for (std::int64_t n = t.lo; n <= t.hi(); ++n) {
    Vec v = pi.at(n);
    const double delta = t.at(n) - s.at(n);
    if (delta != 0.0)
      for (std::size_t d = 0; d < v.size(); ++d) v[d] += delta * alpha[d];
    out.values.push_back(std::move(v));
  }
  auto adjust = [&](const VectorTail& in, const Tail& before, const Tail& after) {
    if (!in.linear || !after.linear) return VectorTail::open(after.inf);
    Vec step = in.step;
    const double delta = after.slope - before.slope;
    if (delta != 0.0)
      for (std::size_t d = 0; d < step.size(); ++d) step[d] += delta * alpha[d];
    return VectorTail::with_step(std::move(step));
  };
  out.left = adjust(pi.left, s.left, t.left);
  out.right = adjust(pi.right, s.right, t.right);
  return out;
}

Vec tau(std::span<const double> v, const SimplexBasis& basis, int j, int k) {
  const Vec r = [&] {
    Vec d = basis[static_cast<std::size_t>(k)];
    const Vec& ej = basis[static_cast<std::size_t>(j)];
    for (std::size_t t = 0; t < d.size(); ++t) d[t] -= ej[t];
    return d;
  }();
  const double f = 2.0 * dot(r, v) / norm2(r);
  Vec out(v.begin(), v.end());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] -= f * r[t];
  return out;
}

}  // namespace bbs
