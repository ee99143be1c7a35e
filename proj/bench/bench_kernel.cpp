// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "ofpca/kernel.hpp"
#include "ofpca/parallel.hpp"
#include "ofpca/sim.hpp"

using namespace ofpca;

namespace {

ObjectSample dist_sample(std::size_t n, std::size_t T, int m) {
  sim::DistSimConfig cfg;
  cfg.n = n;
  cfg.T = T;
  cfg.m = m;
  return sim::simulate_distributions(cfg);
}

void BM_SurfaceSerialReference(benchmark::State& state) {
  const ObjectSample s = dist_sample(state.range(0), 21, 20);
  for (auto _ : state) benchmark::DoNotOptimize(reference::estimate_cov_surface_serial(s));
}

void BM_SurfacePairBlocks(benchmark::State& state) {
  const ObjectSample s = dist_sample(state.range(0), 21, 20);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cov_surface(s, CovMethod::PairBlocks));
  state.counters["threads"] = num_threads();
}

void BM_SurfaceInnerProduct(benchmark::State& state) {
  const ObjectSample s = dist_sample(state.range(0), 21, 20);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cov_surface(s, CovMethod::InnerProduct));
  state.counters["threads"] = num_threads();
}

void BM_DistanceCovSerialReference(benchmark::State& state) {
  const ObjectSample s = dist_sample(state.range(0), 21, 20);
  for (auto _ : state) benchmark::DoNotOptimize(reference::distance_cov_surface_serial(s));
}

void BM_DistanceCovParallel(benchmark::State& state) {
  const ObjectSample s = dist_sample(state.range(0), 21, 20);
  for (auto _ : state) benchmark::DoNotOptimize(distance_cov_surface(s));
  state.counters["threads"] = num_threads();
}

}  // namespace

BENCHMARK(BM_SurfaceSerialReference)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurfacePairBlocks)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurfaceInnerProduct)->Arg(25)->Arg(50)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceCovSerialReference)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceCovParallel)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
