#include "bbs/random.hpp"

#include <cmath>
#include <numeric>

#include "bbs/carrier.hpp"
#include "bbs/errors.hpp"
#include "bbs/stats.hpp"

namespace bbs {

void ColorLaw::validate() const {
  if (kappa < 1) throw InvalidArgument("random", "kappa must be >= 1");
  if (probs.size() != static_cast<std::size_t>(kappa) + 1)
    throw InvalidArgument("random", "law needs kappa+1 probabilities");
  double s = 0;
  for (double p : probs) {
    if (!(p >= 0)) throw InvalidArgument("random", "negative probability");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("random", "probabilities do not sum to 1");
}

bool ColorLaw::admissible() const {
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (!(probs[i] < probs[0])) return false;
  return true;
}

ColorLaw ColorLaw::from_probs(std::vector<double> probs) {
  if (probs.size() < 2) throw InvalidArgument("random", "law needs at least two probabilities");
  ColorLaw law{static_cast<int>(probs.size()) - 1, std::move(probs)};
  law.validate();
  return law;
}

Configuration sample_iid(const ColorLaw& law, std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
  law.validate();
  if (hi < lo - 1) throw InvalidArgument("random", "window end before window start");
  std::vector<double> cum(law.probs.size());
  std::partial_sum(law.probs.begin(), law.probs.end(), cum.begin());
  // Close the table at the last symbol with positive mass.
  std::size_t last = cum.size() - 1;
  while (last > 0 && law.probs[last] == 0) --last;
  for (std::size_t j = last; j < cum.size(); ++j) cum[j] = 1.0;

  Rng rng = make_rng(seed);
  Configuration c{law.kappa, lo, {}, Boundary::Windowed};
  c.cells.resize(static_cast<std::size_t>(hi - lo + 1));
  for (auto& cell : c.cells) {
    const double u = uniform01(rng);
    int j = 0;
    while (u >= cum[static_cast<std::size_t>(j)]) ++j;
    cell = j;
  }
  return c;
}

ColorLaw near_critical_law(int kappa, std::span<const double> c, double n) {
  if (kappa < 1) throw InvalidArgument("random", "kappa must be >= 1");
  if (c.size() != static_cast<std::size_t>(kappa) + 1)
    throw InvalidArgument("random", "need kappa+1 coefficients c_0..c_kappa");
  const double sum = std::accumulate(c.begin(), c.end(), 0.0);
  if (std::abs(sum) > 1e-12) throw InvalidArgument("random", "coefficients must sum to 0");
  for (std::size_t i = 1; i < c.size(); ++i)
    if (!(c[0] > c[i])) throw InvalidArgument("random", "inadmissible coefficients: need c_0 > c_i");
  if (!(n > 0)) throw InvalidArgument("random", "scale n must be positive");
  const double scale = std::sqrt(n * kappa);
  ColorLaw law{kappa, {}};
  for (double cj : c) {
    const double p = 1.0 / (kappa + 1) + cj / scale;
    if (!(p > 0 && p < 1)) throw InvalidArgument("random", "n too small: probability outside (0,1)");
    law.probs.push_back(p);
  }
  // The formula sums to 1 exactly in real arithmetic; absorb rounding.
  const double total = std::accumulate(law.probs.begin(), law.probs.end(), 0.0);
  for (double& p : law.probs) p /= total;
  return law;
}

Configuration sample_near_critical(int kappa, std::span<const double> c, double n, std::int64_t lo,
                                   std::int64_t hi, std::uint64_t seed) {
  return sample_iid(near_critical_law(kappa, c, n), lo, hi, seed);
}

std::vector<DensityEntry> density_check(const Configuration& config, const ColorLaw& law) {
  law.validate();
  if (law.kappa != config.kappa) throw InvalidArgument("random", "law and configuration kappa differ");
  const std::int64_t n = config.last();
  if (n < 1 || (config.boundary == Boundary::Windowed && config.first() > 1))
    throw InvalidArgument("random", "density check needs sites 1..n inside the window");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(config.kappa) + 1, 0);
  for (std::int64_t k = 1; k <= n; ++k) ++counts[static_cast<std::size_t>(config.at(k))];
  std::vector<DensityEntry> out;
  for (int i = 1; i <= config.kappa; ++i) {
    DensityEntry e;
    e.color = i;
    e.n = n;
    e.height = static_cast<double>(counts[0] - counts[static_cast<std::size_t>(i)]);
    const double p0 = law.probs[0], pi = law.probs[static_cast<std::size_t>(i)];
    const double drift = (p0 - pi) * static_cast<double>(n);
    e.ratio = e.height / drift;
    const double var = p0 + pi - (p0 - pi) * (p0 - pi);
    e.z = var > 0 ? (e.height - drift) / std::sqrt(var * static_cast<double>(n)) : 0.0;
    out.push_back(e);
  }
  return out;
}

ColorLaw swapped_law(const ColorLaw& law, int color) {
  law.validate();
  if (color < 1 || color > law.kappa) throw InvalidArgument("random", "colour must be in {1..kappa}");
  ColorLaw s = law;
  std::swap(s.probs[0], s.probs[static_cast<std::size_t>(color)]);
  return s;
}

std::size_t pattern_index(std::span<const int> block, int kappa) {
  std::size_t k = 0;
  for (int s : block) k = k * static_cast<std::size_t>(kappa + 1) + static_cast<std::size_t>(s);
  return k;
}

InvarianceReport invariance_test(const InvarianceSettings& settings) {
  const ColorLaw& law = settings.law;
  law.validate();
  if (!law.admissible()) throw InvalidArgument("random", "inadmissible law: need p_i < p_0 for every colour");
  if (settings.color < 1 || settings.color > law.kappa)
    throw InvalidArgument("random", "colour must be in {1..kappa}");
  if (settings.word_length < 1 || settings.word_length > 4)
    throw InvalidArgument("random", "word length must be in 1..4");
  if (settings.sites < 8 || settings.trials < 1) throw InvalidArgument("random", "too few sites or trials");
  const ColorLaw null_law = settings.null_law.value_or(law);
  null_law.validate();
  if (null_law.kappa != law.kappa) throw InvalidArgument("random", "null law has a different kappa");

  const auto w = static_cast<std::size_t>(settings.word_length);
  std::size_t patterns = 1;
  for (std::size_t k = 0; k < w; ++k) patterns *= static_cast<std::size_t>(law.kappa + 1);

  const std::int64_t N = settings.sites;
  const std::int64_t a_lo = -N / 2, a_hi = N / 2;  // analysed sites [a_lo, a_hi)
  const std::size_t blocks = static_cast<std::size_t>(a_hi - a_lo) / w;

  InvarianceReport rep;
  rep.settings = settings;
  rep.trials.resize(static_cast<std::size_t>(settings.trials));
  std::vector<std::vector<std::uint64_t>> counts(rep.trials.size(), std::vector<std::uint64_t>(patterns, 0));

  std::vector<double> expected(patterns);
  std::vector<int> digits(w);
  for (std::size_t p = 0; p < patterns; ++p) {
    std::size_t q = p;
    double prob = 1;
    for (std::size_t k = 0; k < w; ++k) {
      prob *= null_law.probs[q % static_cast<std::size_t>(law.kappa + 1)];
      q /= static_cast<std::size_t>(law.kappa + 1);
    }
    expected[p] = prob * static_cast<double>(blocks);
  }

  parallel_for(rep.trials.size(), settings.threads, [&](std::size_t t) {
    TrialResult& tr = rep.trials[t];
    tr.seed = derive_seed(settings.seed, t);
    const Configuration eta = sample_iid(law, -N, N - 1, tr.seed);
    const CarrierTrace trace = run_carrier(eta, settings.color, 0);
    auto renews = [&](std::int64_t from, std::int64_t to) {
      for (std::int64_t n = from; n < to; ++n)
        if (trace.loads[static_cast<std::size_t>(n + N)] == 0) return true;
      return false;
    };
    tr.contaminated = !renews(-N, a_lo) || !renews(a_hi, N);
    const Configuration out = apply_Ti_direct(eta, settings.color, 0);
    auto& c = counts[t];
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto start = static_cast<std::size_t>(a_lo + N) + b * w;
      c[pattern_index(std::span<const int>(out.cells).subspan(start, w), law.kappa)]++;
    }
    std::vector<double> obs(c.begin(), c.end());
    const ChiSquareResult chi = chi_square_test(obs, expected);
    tr.statistic = chi.statistic;
    tr.df = chi.df;
    tr.p_value = chi.p_value;
    tr.pass = chi.p_value > settings.threshold;
    tr.blocks = blocks;
  });

  rep.pattern_counts.assign(patterns, 0);
  rep.pattern_expected = expected;
  for (std::size_t t = 0; t < rep.trials.size(); ++t) {
    const TrialResult& tr = rep.trials[t];
    if (tr.contaminated) {
      ++rep.excluded;
      continue;
    }
    ++rep.used;
    if (tr.pass) ++rep.passes;
    rep.min_p = std::min(rep.min_p, tr.p_value);
    rep.max_p = std::max(rep.max_p, tr.p_value);
    for (std::size_t p = 0; p < patterns; ++p) rep.pattern_counts[p] += counts[t][p];
  }
  // Excluded trials scale the required count down proportionally.
  const int needed = static_cast<int>(
      std::ceil(static_cast<double>(settings.required_passes) * rep.used / settings.trials));
  rep.pass = rep.used > 0 && rep.passes >= needed;
  return rep;
}

}  // namespace bbs
