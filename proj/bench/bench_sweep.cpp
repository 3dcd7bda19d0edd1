#include <benchmark/benchmark.h>

#include "mdr/sweep.hpp"

namespace {

void run(benchmark::State& state, mdr::Execution execution) {
    mdr::SweepOptions opts;
    opts.count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mdr::run_sweep(opts, execution));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) { run(state, mdr::Execution::Serial); }
void BM_SweepParallel(benchmark::State& state) { run(state, mdr::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
