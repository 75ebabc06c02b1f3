// Serial reference against the OpenMP scan over the default E = -1 grid.

#include "langmuir/shooting.hpp"

#include <benchmark/benchmark.h>

namespace {

using langmuir::IntegratorSettings;

void bm_scan_serial(benchmark::State& state)
{
    const auto grid = langmuir::default_scan_grid(-1.0);
    const IntegratorSettings st;
    for (auto _ : state) {
        benchmark::DoNotOptimize(langmuir::scan_alpha_serial(-1.0, grid, st));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void bm_scan_parallel(benchmark::State& state)
{
    const auto grid = langmuir::default_scan_grid(-1.0);
    const IntegratorSettings st;
    for (auto _ : state) {
        benchmark::DoNotOptimize(langmuir::scan_alpha(-1.0, grid, st));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
    state.counters["threads"] = langmuir::worker_count();
}

void bm_scan_fine_grid(benchmark::State& state)
{
    const auto grid = langmuir::uniform_grid(0.05, 3.45, static_cast<int>(state.range(0)));
    const IntegratorSettings st;
    const bool parallel = state.range(1) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(parallel ? langmuir::scan_alpha(-1.0, grid, st)
                                          : langmuir::scan_alpha_serial(-1.0, grid, st));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

} // namespace

BENCHMARK(bm_scan_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_scan_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_scan_fine_grid)->ArgsProduct({{200}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
