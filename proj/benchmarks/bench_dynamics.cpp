#include <benchmark/benchmark.h>

#include "bbs/carrier.hpp"
#include "bbs/continuum.hpp"
#include "bbs/dynamics.hpp"
#include "bbs/random.hpp"
#include "bbs/simplex.hpp"

namespace {

bbs::Configuration sample(int kappa, std::int64_t sites) {
  std::vector<double> probs(static_cast<std::size_t>(kappa) + 1, 0.5 / kappa);
  probs[0] = 0.5;
  const auto law = bbs::ColorLaw::from_probs(probs);
  auto c = bbs::sample_iid(law, 0, sites - 1, 7);
  c.boundary = bbs::Boundary::FiniteSupport;
  return c;
}

void BM_TiPitman(benchmark::State& state) {
  const auto path = bbs::encode(sample(3, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bbs::apply_Ti(path, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TiPitman)->RangeMultiplier(10)->Range(1000, 100000);

void BM_TiDirect(benchmark::State& state) {
  const auto config = sample(3, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bbs::apply_Ti_direct(config, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TiDirect)->RangeMultiplier(10)->Range(1000, 100000);

void BM_FullUpdate(benchmark::State& state) {
  const auto path = bbs::encode(sample(3, state.range(0)));
  const auto word = bbs::full_update(3);
  for (auto _ : state) benchmark::DoNotOptimize(bbs::apply_word(path, word));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FullUpdate)->Arg(10000);

void BM_SampleIid(benchmark::State& state) {
  const auto law = bbs::ColorLaw::from_probs({0.5, 0.3, 0.2});
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(bbs::sample_iid(law, 0, state.range(0) - 1, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleIid)->Arg(1000000);

void BM_ContinuumTi(benchmark::State& state) {
  const auto basis = bbs::build_simplex_basis(2);
  const bbs::DriftSpec spec{2, {2.0, -1.0, -1.0}};
  const auto path = bbs::sample_brownian_with_drift(spec, basis, 50.0, 0.01, 3);
  for (auto _ : state) benchmark::DoNotOptimize(bbs::apply_Ti_continuum(path, basis, 1));
}
BENCHMARK(BM_ContinuumTi);

}  // namespace

BENCHMARK_MAIN();
