#include <benchmark/benchmark.h>

#include "varest/moments.hpp"
#include "varest/popgen.hpp"

namespace {

varest::Population population(std::size_t n) {
  varest::PopulationSpec spec;
  spec.size = n;
  return varest::generate_population(spec);
}

void BM_CentralMoment(benchmark::State& state) {
  const auto pop = population(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(varest::central_moment(pop, 2, 2, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CentralMoment)->Arg(1000)->Arg(100000);

void BM_DeltaTable(benchmark::State& state) {
  const auto pop = population(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(varest::delta_table(pop));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DeltaTable)->Arg(1000)->Arg(100000);

}  // namespace
