// Serial reference vs OpenMP for the two parallel kernels. Run with
// OMP_NUM_THREADS set; on a single core the parallel variants only show
// their scheduling overhead.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "seqrank/ranker.hpp"
#include "seqrank/stats.hpp"
#include "seqrank/synthetic.hpp"

namespace {

using namespace seqrank;

template <bool Parallel>
void BM_WinColumns(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::vector<double> wins(d * d, 0.5), mean(d), perf(d);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  for (auto& v : perf) v = normal(gen);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::update_win_columns_parallel(wins, perf, 0.999, mean);
    else kernels::update_win_columns_serial(wins, perf, 0.999, mean);
    benchmark::DoNotOptimize(mean.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d * d));
}

template <Execution E>
void BM_Stationarity(benchmark::State& state) {
  JumpDiffusionConfig cfg;
  cfg.n_assets = static_cast<std::size_t>(state.range(0));
  cfg.n_steps = 1000;
  const auto panel = simulate_jump_diffusion(cfg);
  StationarityOptions opt;
  opt.execution = E;
  for (auto _ : state) benchmark::DoNotOptimize(monthly_stationarity_report(panel, opt));
}

}  // namespace

BENCHMARK(BM_WinColumns<false>)->Name("win_columns/serial")->Arg(50)->Arg(250)->Arg(1000);
BENCHMARK(BM_WinColumns<true>)->Name("win_columns/parallel")->Arg(50)->Arg(250)->Arg(1000);
BENCHMARK(BM_Stationarity<Execution::serial>)->Name("stationarity/serial")->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Stationarity<Execution::parallel>)->Name("stationarity/parallel")->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
