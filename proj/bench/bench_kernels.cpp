#include <benchmark/benchmark.h>

#include <algorithm>

#include "coxclaims/kernels.hpp"
#include "coxclaims/pascal.hpp"
#include "coxclaims/thinning.hpp"

using namespace coxclaims;

namespace {

ModelSpec reference() {
  return ModelSpec(TransitionMatrix::from_rows({{0.9, 0.1}, {0.2, 0.8}}),
                   StateDistribution::from_vector({2.0 / 3.0, 1.0 / 3.0}), {1, 3}, 0.5,
                   {0, 1, 2, 3}, {1, 1, 1});
}

// Unification problem for the reference spec's reported counts.
kernels::UnifyProblem unify_problem(double eps) {
  const ModelSpec spec = reference();
  const auto ts = thinned_scales(spec, DelayModel::exponential(1.0), 3.0);
  const PascalMixtureMulti mix = hmm_mixture(spec, ts.reported);
  const double theta = *std::min_element(ts.reported.begin(), ts.reported.end());
  const PascalMixtureMulti uni = unify_scales(mix, theta, eps);

  kernels::UnifyProblem p;
  const int k = mix.dims();
  p.components = mix.components;
  for (int j = 0; j < k; ++j) {
    int lo = 1 << 30, hi = 0, top = 0;
    for (const auto& c : mix.components) lo = std::min(lo, c.shapes[j]), hi = std::max(hi, c.shapes[j]);
    for (const auto& c : uni.components) top = std::max(top, c.shapes[j]);
    const int extent = top - lo + 1;
    const double r = theta / ts.reported[j];
    std::vector<double> ladder(static_cast<std::size_t>(hi - lo + 1) * extent, 0.0);
    for (int n = lo; n <= hi; ++n)
      for (int m = n; m <= top; ++m)
        ladder[(n - lo) * extent + (m - lo)] =
            r >= 1.0 ? (m == n) : std::exp(log_binomial(m - 1, n - 1) + n * std::log(r) +
                                           (m - n) * std::log1p(-r));
    p.offsets.push_back(lo);
    p.extents.push_back(extent);
    p.ladders.push_back(std::move(ladder));
  }
  return p;
}

void BM_ReplicateCountsSerial(benchmark::State& state) {
  const ModelSpec spec = reference();
  const auto delay = DelayModel::exponential(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::replicate_counts_serial(spec, delay, 3, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ReplicateCounts(benchmark::State& state) {
  const ModelSpec spec = reference();
  const auto delay = DelayModel::exponential(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::replicate_counts(spec, delay, 3, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_UnifyWeightsSerial(benchmark::State& state) {
  const auto p = unify_problem(1e-12);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::unify_weights_serial(p));
  state.counters["cells"] = static_cast<double>(p.cells());
}

void BM_UnifyWeights(benchmark::State& state) {
  const auto p = unify_problem(1e-12);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::unify_weights(p));
  state.counters["cells"] = static_cast<double>(p.cells());
}

}  // namespace

BENCHMARK(BM_ReplicateCountsSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateCounts)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_UnifyWeightsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnifyWeights)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
