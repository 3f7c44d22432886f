#include <benchmark/benchmark.h>

#include "zemtwist/linmodel.hpp"
#include "zemtwist/sim.hpp"

using namespace zemtwist;

static void BM_MatExpIntegratedModel(benchmark::State& state) {
  const LinearModels m = build_models(VehicleCoeffs{}, 0.0, 0.0);
  const double tgo = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(mat_exp(m.AI, tgo));
}
BENCHMARK(BM_MatExpIntegratedModel)->Arg(1)->Arg(10)->Arg(40);

static void BM_TransitionTableLookup(benchmark::State& state) {
  const LinearModels m = build_models(VehicleCoeffs{}, 0.0, 0.0);
  const TransitionMatrix table(m.AI, 5.0, 1e-3);
  double tgo = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.at(tgo));
    tgo = tgo > 4.0 ? 0.0 : tgo + 0.0137;
  }
}
BENCHMARK(BM_TransitionTableLookup);

static void BM_Engagement(benchmark::State& state) {
  ScenarioConfig sc;
  sc.model.transitionTable = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_engagement(sc, Mode::Atsmc).terminal.missDistance);
}
BENCHMARK(BM_Engagement)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
