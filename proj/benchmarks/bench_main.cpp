#include <benchmark/benchmark.h>

#include "sdwave/energetics.hpp"
#include "sdwave/grid.hpp"
#include "sdwave/solver.hpp"

using namespace sdwave;

namespace {

GridPtr grid_for(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  return PolarGrid::build_annulus(1.0, 8.0, n, n);
}

void BM_Laplacian(benchmark::State& st) {
  const auto g = grid_for(st);
  const Field u = initial_bump(g, 1.0, 2.0, 4.0);
  for (auto _ : st) benchmark::DoNotOptimize(laplacian(u));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_Step(benchmark::State& st, PreconditionerKind kind) {
  const auto g = grid_for(st);
  TimeScheme scheme;
  scheme.dt = 0.02;
  scheme.preconditioner = kind;
  scheme.max_linear_iters = 2000;
  Stepper stepper(g, scheme, {1.0, 1.0, 3.0, 3.0});
  State s{initial_bump(g, 1.0, 2.0, 4.0), Field(g), 0.0};
  for (auto _ : st) {
    s = stepper.step(s);
    s.t += scheme.dt;
  }
  st.counters["cg_iters"] = static_cast<double>(stepper.last_solve().iterations);
}
BENCHMARK_CAPTURE(BM_Step, spectral, PreconditionerKind::spectral)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(BM_Step, jacobi, PreconditionerKind::jacobi)->Arg(64)->Arg(128);

void BM_Diagnostics(benchmark::State& st) {
  const auto g = grid_for(st);
  const State s{initial_bump(g, 1.0, 2.0, 4.0), initial_bump(g, 0.3, 2.5, 3.5), 1.0};
  const WeightParams w(2.0, 0.9);
  for (auto _ : st) benchmark::DoNotOptimize(diagnostics(s, w));
}
BENCHMARK(BM_Diagnostics)->Arg(64)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
