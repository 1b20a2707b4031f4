#include <benchmark/benchmark.h>

#include "mpimex/integrator.hpp"
#include "mpimex/problems/model2.hpp"
#include "mpimex/problems/piston.hpp"
#include "mpimex/problems/predprey.hpp"
#include "mpimex/stability.hpp"

using namespace mpimex;

static void BM_Eigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = std::sin(1.0 + i * 31 + j * 7);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(a));
}
BENCHMARK(BM_Eigenvalues)->Arg(8)->Arg(16)->Arg(32);

static void BM_Model2Step(benchmark::State& state) {
  Model2Problem prob{-1.0, -2.0, 0.5};
  auto sys = prob.system();
  auto tab = builtin_tableau(SchemeId::imex4);
  PartitionedState u = prob.initial();
  for (auto _ : state)
    benchmark::DoNotOptimize(step_partitioned(sys, tab, PredictorKind::strong_gs, u, 0.0, 0.1));
}
BENCHMARK(BM_Model2Step);

static void BM_PredPreyStep(benchmark::State& state) {
  PredPreyProblem prob;
  prob.n = static_cast<int>(state.range(0));
  auto sys = prob.system();
  auto tab = builtin_tableau(SchemeId::imex3);
  PartitionedState u = prob.initial();
  for (auto _ : state)
    benchmark::DoNotOptimize(step_partitioned(sys, tab, PredictorKind::strong_gs, u, 0.0, 0.05));
}
BENCHMARK(BM_PredPreyStep)->Arg(10)->Arg(20);

static void BM_PistonStep(benchmark::State& state) {
  PistonProblem prob;
  auto sys = prob.system();
  auto tab = builtin_tableau(SchemeId::imex2);
  PartitionedState u = prob.initial();
  for (auto _ : state)
    benchmark::DoNotOptimize(step_partitioned(sys, tab, PredictorKind::weak_gs, u, 0.0, 0.01));
}
BENCHMARK(BM_PistonStep);

BENCHMARK_MAIN();
