// Compares the serial reference sweep with the OpenMP team on the same
// problems. Within-group block solves are the parallel unit, so speedup is
// bounded by the larger group's block count.

#include "gsadmm/blockspace.hpp"
#include "gsadmm/engine.hpp"
#include "gsadmm/lvggms.hpp"

#include <benchmark/benchmark.h>

using namespace gsadmm;

namespace {

constexpr int kSweeps = 10;

void bench_quadratic(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  QuadraticFixture fx =
      make_quadratic_test_problem(blocks, blocks, 96, 42);

  SolverConfig cfg;
  cfg.params = {1.0, 0.9, 1.09, static_cast<double>(blocks), static_cast<double>(blocks)};
  cfg.threads = threads;

  GroupedPoint start = zero_point(fx.problem);
  for (auto _ : state) {
    SolveResult r = run_steps(fx.problem, start, cfg, kSweeps);
    benchmark::DoNotOptimize(r.final_state.residual.norm());
  }
  state.SetItemsProcessed(state.iterations() * kSweeps);
}

void bench_lvggms(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  lvggms::Instance inst = lvggms::generate_instance(n, 7);
  lvggms::BuiltProblem built = lvggms::make_problem(inst, lvggms::Grouping::VariantI);

  SolverConfig cfg;
  cfg.params = {0.06, 0.8, 1.17, 2.0, 3.0};
  cfg.threads = threads;

  for (auto _ : state) {
    SolveResult r = run_steps(built.problem, built.start, cfg, kSweeps);
    benchmark::DoNotOptimize(r.final_state.residual.norm());
  }
  state.SetItemsProcessed(state.iterations() * kSweeps);
}

}  // namespace

BENCHMARK(bench_quadratic)
    ->ArgNames({"blocks", "threads"})
    ->Args({4, 1})
    ->Args({4, 2})
    ->Args({4, 4})
    ->Args({8, 1})
    ->Args({8, 2})
    ->Args({8, 4})
    ->Args({8, 8})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(bench_lvggms)
    ->ArgNames({"n", "threads"})
    ->Args({40, 1})
    ->Args({40, 2})
    ->Args({80, 1})
    ->Args({80, 2})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
