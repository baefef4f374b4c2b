#include <benchmark/benchmark.h>

#include "varest/random.hpp"
#include "varest/sampling.hpp"

namespace {

void BM_SrsworDraw(benchmark::State& state) {
  varest::Rng rng(1);
  varest::SrsworSampler sampler(100000);
  std::vector<std::size_t> out;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    sampler.draw(rng, n, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SrsworDraw)->Arg(10)->Arg(100)->Arg(1000);

void BM_TwoPhaseDraw(benchmark::State& state) {
  varest::Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(varest::draw_two_phase(rng, 5000, 400, 100));
}
BENCHMARK(BM_TwoPhaseDraw);

void BM_Normal(benchmark::State& state) {
  varest::Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_Normal);

}  // namespace
