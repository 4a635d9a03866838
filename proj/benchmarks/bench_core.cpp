#include <benchmark/benchmark.h>

#include "mpa/control.hpp"
#include "mpa/model.hpp"
#include "mpa/persistence.hpp"
#include "mpa/season_sim.hpp"
#include "mpa/strategy.hpp"

namespace {

mpa::HabitatParams habitat(double r = 5.0) {
  mpa::HabitatSpec s;
  s.growth_rate = r;
  return mpa::HabitatParams(s);
}

void BM_SeasonMatrix(benchmark::State& state) {
  const auto p = habitat();
  double E = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpa::season_matrix(p, E));
    E = E > 20.0 ? 0.0 : E + 0.01;
  }
}
BENCHMARK(BM_SeasonMatrix);

void BM_EffortBoundary(benchmark::State& state) {
  const auto p = habitat(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(mpa::effort_boundary(p));
}
BENCHMARK(BM_EffortBoundary);

void BM_IntegrateComposite(benchmark::State& state) {
  const auto p = habitat();
  const mpa::EconParams e{mpa::EconSpec{}};
  const auto policy = mpa::EffortPolicy::composite(e, p);
  const auto x0 = mpa::default_initial_state(p);
  const double step = p.season_length() / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mpa::integrate_season(x0, policy, e, p, step));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateComposite)->Arg(500)->Arg(2000)->Arg(8000);

void BM_AdjointSweep(benchmark::State& state) {
  const auto p = habitat();
  const mpa::EconParams e{mpa::EconSpec{}};
  const auto traj = mpa::integrate_season(mpa::default_initial_state(p), mpa::EffortPolicy::composite(e, p),
                                          e, p, mpa::default_step(p));
  for (auto _ : state) benchmark::DoNotOptimize(mpa::adjoint_sweep(traj, e, p));
}
BENCHMARK(BM_AdjointSweep);

void BM_TraceBoundary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const mpa::PlaneSpec spec{mpa::Plane::EffortVsReserve, 0.5, habitat(2.0), {0.0, 0.99, n}, {0.0, 30.0, 200}};
  for (auto _ : state) benchmark::DoNotOptimize(mpa::trace_boundary(spec));
}
BENCHMARK(BM_TraceBoundary)->Arg(50)->Arg(200);

void BM_CompareStrategies(benchmark::State& state) {
  const auto p = habitat();
  const mpa::EconParams e{mpa::EconSpec{}};
  const auto x0 = mpa::default_initial_state(p);
  for (auto _ : state) benchmark::DoNotOptimize(mpa::compare_strategies(x0, e, p, mpa::default_step(p)));
}
BENCHMARK(BM_CompareStrategies)->Unit(benchmark::kMillisecond);

void BM_RunYears(benchmark::State& state) {
  const auto p = habitat();
  const mpa::EconParams e{mpa::EconSpec{}};
  const auto policy = mpa::EffortPolicy::composite(e, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpa::run_years(10.0, state.range(0), policy, e, p, mpa::default_step(p)));
  }
}
BENCHMARK(BM_RunYears)->Arg(3)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
