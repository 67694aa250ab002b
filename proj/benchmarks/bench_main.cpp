#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "sle/diffusion.hpp"
#include "sle/fractal.hpp"
#include "sle/loewner.hpp"
#include "sle/partition.hpp"

namespace {

using namespace sle;

void BM_ComputeTrace(benchmark::State& state) {
  const DrivingPath d = sample_driving(8.0 / 3.0, 1.0, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(compute_trace(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeTrace)->RangeMultiplier(2)->Range(500, 4000)->Complexity(benchmark::oNSquared);

void BM_NearTraceDistances(benchmark::State& state) {
  const DrivingPath d = sample_driving(2.0, 1.0, static_cast<std::size_t>(state.range(0)), 1);
  const std::vector<Complex> targets{Complex(0.0, 1.0)};
  TraceOptions o;
  o.refine = 4;
  for (auto _ : state) benchmark::DoNotOptimize(near_trace_distances(d, targets, 0.2, o));
}
BENCHMARK(BM_NearTraceDistances)->Arg(1000)->Arg(2000);

void BM_SurvivalStepping(benchmark::State& state) {
  const std::vector<double> grid{1.0, 2.0, 3.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(survival_curve(6.0, std::numbers::pi, grid, 1000, 1e-3, 1, 1));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SurvivalStepping)->Unit(benchmark::kMillisecond);

void BM_BoxCount(benchmark::State& state) {
  TraceOptions o;
  o.max_gap = 0.002;
  const TracePath t = compute_trace(sample_driving(8.0 / 3.0, 1.0, 4000, 2), o);
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(box_count(t.points, eps));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.size()));
}
BENCHMARK(BM_BoxCount)->Arg(8)->Arg(128);

void BM_PartitionEnumeration(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_partition_polynomial(k, k));
}
BENCHMARK(BM_PartitionEnumeration)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
