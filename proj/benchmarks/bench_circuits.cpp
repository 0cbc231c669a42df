#include <benchmark/benchmark.h>

#include "gridsurf/mirror.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;

static void BM_TraceCircuits(benchmark::State& state) {
  RealizeResult res = enumerate_realizations(builtin_code_a());
  EnhancedMirrorDiagram em = from_surface_diagram(res.realizations.at(0));
  for (auto _ : state) {
    auto circuits = trace_circuits(em.m);
    benchmark::DoNotOptimize(circuits.size());
  }
}
BENCHMARK(BM_TraceCircuits);

static void BM_CanonicalForm(benchmark::State& state) {
  RealizeResult res = enumerate_realizations(builtin_code_a());
  const SurfaceDiagram& pi = res.realizations.at(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_form(pi));
  }
}
BENCHMARK(BM_CanonicalForm);
