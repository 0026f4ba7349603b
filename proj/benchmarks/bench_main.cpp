#include <benchmark/benchmark.h>

#include "perclab/ball.hpp"
#include "perclab/cover.hpp"
#include "perclab/percolation.hpp"
#include "perclab/saw.hpp"
#include "perclab/trees.hpp"

using namespace perclab;

static void BM_Ball(benchmark::State& state) {
  const auto g = hexagonal_lattice();
  for (auto _ : state) benchmark::DoNotOptimize(ball(*g, static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_Ball)->Arg(16)->Arg(64);

// One trial per iteration near criticality, where clusters are largest.
static void BM_ClusterTrial(benchmark::State& state) {
  const auto g = square_lattice();
  ClusterExplorer ex(*g, static_cast<int>(state.range(0)), kDefaultVertexBudget);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ex.run(0.5, kDefaultSeed, trial++).reached);
}
BENCHMARK(BM_ClusterTrial)->Arg(16)->Arg(64);

static void BM_CrossingProfile(benchmark::State& state) {
  const auto g = regular_tree(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(crossing_profile(*g, {8, 12, 16}, 0.5, 2000, kDefaultSeed));
}
BENCHMARK(BM_CrossingProfile)->Unit(benchmark::kMillisecond);

static void BM_CountSaws(benchmark::State& state) {
  const auto g = hexagonal_lattice();
  const int n = static_cast<int>(state.range(0));
  std::uint64_t visits = 0;
  for (auto _ : state) visits = count_saws(*g, n).node_visits;
  state.counters["visits/s"] = benchmark::Counter(static_cast<double>(visits), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_CountSaws)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

static void BM_CutsetByClass(benchmark::State& state) {
  const auto g = fig1_tree(3);
  for (auto _ : state) benchmark::DoNotOptimize(min_cutset_value(*g, 64, 2.1).value);
}
BENCHMARK(BM_CutsetByClass);

static void BM_CutsetStreaming(benchmark::State& state) {
  const auto cover = universal_cover(hexagonal_lattice());
  for (auto _ : state) benchmark::DoNotOptimize(min_cutset_value(*cover, 10, 2.1).value);
}
BENCHMARK(BM_CutsetStreaming)->Unit(benchmark::kMillisecond);

static void BM_FibreCheck(benchmark::State& state) {
  const auto cover = universal_cover(hexagonal_lattice());
  for (auto _ : state) benchmark::DoNotOptimize(verify_fibres(*cover, 8, 7).checked);
}
BENCHMARK(BM_FibreCheck)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
