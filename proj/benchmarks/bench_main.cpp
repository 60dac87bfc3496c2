#include <benchmark/benchmark.h>

#include <random>

#include "oracles.hpp"
#include "proxtrace/distributions.hpp"
#include "proxtrace/risk.hpp"
#include "proxtrace/sim.hpp"
#include "proxtrace/tracing.hpp"

using namespace proxtrace;

static void BM_AssessArea(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.1, 10.0);
  AreaObservation area;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    area.observations.push_back({static_cast<std::size_t>(i % 4), d(rng), {}});
  }
  const auto w = WeightConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(assess_area(area, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssessArea)->Arg(20)->Arg(1000);

static void BM_Enumerate(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_distributions(n, 4));
}
BENCHMARK(BM_Enumerate)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

static void BM_TraceCoContacts(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const oracle::GraphShape shape{static_cast<std::size_t>(state.range(0)), 10, 4};
  const auto graph = oracle::random_graph(rng, shape, 5);
  const auto ids = oracle::node_ids(shape.nodes);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_co_contacts(ids[i++ % ids.size()], graph, SimClock(5), {}));
  }
}
BENCHMARK(BM_TraceCoContacts)->Arg(200)->Arg(2000);

// one day of the default world, app on and off
static void BM_SimStep(benchmark::State& state) {
  SimConfig c;
  c.app_enabled = state.range(0) != 0;
  c.threads = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    state.PauseTiming();
    World w(c);
    for (int d = 0; d < 6; ++d) w.step();
    state.ResumeTiming();
    benchmark::DoNotOptimize(w.step());
  }
}
BENCHMARK(BM_SimStep)->Args({0, 1})->Args({1, 1})->Args({1, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
