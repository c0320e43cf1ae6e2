#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "hsalpha/builtin.hpp"
#include "hsalpha/evolution.hpp"
#include "hsalpha/harness.hpp"
#include "hsalpha/projection.hpp"

using namespace hsalpha;

namespace {

double dx_of(const benchmark::State& s) { return std::pow(4.0, -static_cast<double>(s.range(0))); }

void BM_ProjectCusp(benchmark::State& state) {
  const auto d = builtin::cusp();
  const double dx = dx_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(project(d, dx));
  state.SetComplexityN(static_cast<long>(1.0 / dx));
}
BENCHMARK(BM_ProjectCusp)->DenseRange(2, 8, 2)->Complexity();

void BM_ToLagrangian(benchmark::State& state) {
  const auto p = project(builtin::cusp(), dx_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(to_lagrangian_grid(p));
}
BENCHMARK(BM_ToLagrangian)->DenseRange(2, 8, 2);

void BM_SolveCusp(benchmark::State& state) {
  const auto g = to_lagrangian_grid(project(builtin::cusp(), dx_of(state)));
  const auto a = builtin::alpha_cusp();
  SolveOptions o;
  o.snapshot_budget = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g, a, 3.0, {}, o));
}
BENCHMARK(BM_SolveCusp)->DenseRange(2, 7, 1)->Unit(benchmark::kMillisecond);

void BM_SolveEx42(benchmark::State& state) {
  const auto g = to_lagrangian_grid(project(builtin::ex42(), dx_of(state)));
  const auto a = builtin::alpha_ex42();
  for (auto _ : state) benchmark::DoNotOptimize(solve(g, a, 3.0));
}
BENCHMARK(BM_SolveEx42)->DenseRange(2, 7, 1)->Unit(benchmark::kMillisecond);

void BM_ErrorSweep(benchmark::State& state) {
  const auto mk = [](double dx) {
    return std::make_shared<const Trajectory>(
        solve(to_lagrangian_grid(project(builtin::ex42(), dx)), builtin::alpha_ex42(), 3.0));
  };
  const TrajectorySource ref(mk(std::pow(4.0, -7.0)), false), num(mk(dx_of(state)), true);
  for (auto _ : state) benchmark::DoNotOptimize(relative_error(ref, num, 3.0));
}
BENCHMARK(BM_ErrorSweep)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
