// Serial references against the OpenMP kernels.
//   bench_kernels --benchmark_filter=Enumerate
#include "cardguess/kernels.hpp"
#include "cardguess/montecarlo.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace cardguess;

namespace {

std::vector<Player> table4_players(DeckSpec d) {
  std::vector<Player> out;
  for (const char* s : {"safe", "shift", "gshift:0.3", "half+", "half-"}) out.emplace_back(StrategySpec::parse(s), d);
  return out;
}

void BM_EnumerateSerial(benchmark::State& state) {
  const DeckSpec d(2, static_cast<int>(state.range(0)));
  const auto players = table4_players(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_scores_serial(d, players, FeedbackModel::YesNo));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(deck_count(d)));
}

void BM_EnumerateParallel(benchmark::State& state) {
  const DeckSpec d(2, static_cast<int>(state.range(0)));
  const auto players = table4_players(d);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_scores(d, players, FeedbackModel::YesNo, kDefaultEnumerationCap, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(deck_count(d)));
}

void BM_SimulateSerial(benchmark::State& state) {
  const DeckSpec d(4, 10);
  const auto players = table4_players(d);
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_sums_serial(d, players, FeedbackModel::YesNo, trials, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}

void BM_SimulateParallel(benchmark::State& state) {
  const DeckSpec d(4, 10);
  const auto players = table4_players(d);
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_sums(d, players, FeedbackModel::YesNo, trials, 1, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}

void thread_args(benchmark::internal::Benchmark* b, std::int64_t size) {
  const int max_threads = omp_get_max_threads();
  for (int t = 1; t <= max_threads; t *= 2) b->Args({size, t});
  if ((max_threads & (max_threads - 1)) != 0) b->Args({size, max_threads});
}

}  // namespace

BENCHMARK(BM_EnumerateSerial)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)
    ->Apply([](benchmark::internal::Benchmark* b) {
      thread_args(b, 5);
      thread_args(b, 6);
    })
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Apply([](benchmark::internal::Benchmark* b) { thread_args(b, 100000); })
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
