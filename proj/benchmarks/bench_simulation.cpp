#include <benchmark/benchmark.h>

#include "varest/popgen.hpp"
#include "varest/simulation.hpp"

namespace {

void BM_RunSimulation(benchmark::State& state) {
  static const varest::Population pop = varest::generate_population(varest::PopulationSpec{});
  varest::SimulationConfig c;
  c.n = 100;
  c.nprime = 400;
  c.reps = 1000;
  c.seed = 1;
  c.threads = static_cast<unsigned>(state.range(0));
  c.estimators = varest::parse_estimator_list("all", true);
  for (auto _ : state) benchmark::DoNotOptimize(varest::run_simulation(pop, c));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.reps));
}
// Work runs on worker threads, so wall time is the meaningful measure.
BENCHMARK(BM_RunSimulation)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
