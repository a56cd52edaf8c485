#include <benchmark/benchmark.h>

#include <random>

#include "vilenkin/hardy.hpp"
#include "vilenkin/kernels.hpp"
#include "vilenkin/means.hpp"
#include "vilenkin/transform.hpp"

using namespace vilenkin;

namespace {

GridFunction random_function(const GroupConfig& g) {
  std::mt19937_64 rng(1);
  GridFunction f(g);
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = {unit_uniform(rng), unit_uniform(rng)};
  return f;
}

GroupConfig walsh_or_mixed(const benchmark::State& state) {
  if (state.range(1) == 0) return GroupConfig::walsh(static_cast<int>(state.range(0)));
  std::vector<int> m;
  for (int k = 0; k < state.range(0); ++k) m.push_back(k % 2 == 0 ? 2 : 3);
  return GroupConfig(m);
}

void BM_Forward(benchmark::State& state) {
  const GroupConfig g = walsh_or_mixed(state);
  const GridFunction f = random_function(g);
  for (auto _ : state) benchmark::DoNotOptimize(forward(f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void BM_Inverse(benchmark::State& state) {
  const GroupConfig g = walsh_or_mixed(state);
  const Spectrum s = forward(random_function(g));
  for (auto _ : state) benchmark::DoNotOptimize(inverse(s));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void BM_FejerMean(benchmark::State& state) {
  const GroupConfig g = GroupConfig::walsh(static_cast<int>(state.range(0)));
  const Spectrum s = forward(random_function(g));
  const std::size_t n = g.size() / 3;
  for (auto _ : state) benchmark::DoNotOptimize(fejer_mean(s, n));
}

void BM_FejerKernel(benchmark::State& state) {
  const GroupConfig g = GroupConfig::walsh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fejer_kernel(g, g.size() / 3));
}

void BM_MaximalFunction(benchmark::State& state) {
  const GroupConfig g = GroupConfig::walsh(static_cast<int>(state.range(0)));
  const GridFunction f = random_function(g);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_function(f));
}

}  // namespace

BENCHMARK(BM_Forward)->ArgsProduct({{8, 12, 16}, {0, 1}});
BENCHMARK(BM_Inverse)->ArgsProduct({{8, 12, 16}, {0, 1}});
BENCHMARK(BM_FejerMean)->DenseRange(8, 16, 4);
BENCHMARK(BM_FejerKernel)->DenseRange(8, 16, 4);
BENCHMARK(BM_MaximalFunction)->DenseRange(8, 16, 4);

BENCHMARK_MAIN();
