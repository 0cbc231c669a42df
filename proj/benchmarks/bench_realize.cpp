#include <benchmark/benchmark.h>

#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;

static void BM_RealizeFirstCode(benchmark::State& state) {
  DividingCode code = builtin_code_a();
  for (auto _ : state) {
    RealizeResult res = enumerate_realizations(code);
    benchmark::DoNotOptimize(res.realizations.size());
  }
}
BENCHMARK(BM_RealizeFirstCode)->Unit(benchmark::kMillisecond);

static void BM_RealizeSecondCode(benchmark::State& state) {
  DividingCode code = builtin_code_b();
  for (auto _ : state) {
    RealizeResult res = enumerate_realizations(code);
    benchmark::DoNotOptimize(res.realizations.size());
  }
}
BENCHMARK(BM_RealizeSecondCode)->Unit(benchmark::kMillisecond);

static void BM_BuildIncidence(benchmark::State& state) {
  DividingCode code = builtin_code_a();
  for (auto _ : state) {
    AbstractIncidence inc = build_incidence(code);
    benchmark::DoNotOptimize(inc.vertex_count);
  }
}
BENCHMARK(BM_BuildIncidence);
