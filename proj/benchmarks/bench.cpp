#include <benchmark/benchmark.h>

#include "bfexact/bf_tests.hpp"
#include "bfexact/distributions.hpp"
#include "bfexact/rng.hpp"
#include "bfexact/sim.hpp"
#include "bfexact/tp_family.hpp"
#include "bfexact/transform.hpp"

using namespace bfexact;

static void bm_project(benchmark::State& state) {
    RngStream rng(1, 0);
    Sample x = sample_normal(rng, 0.0, 1.0, state.range(0));
    Sample y = sample_normal(rng, 0.0, 4.0, state.range(1));
    project(x, y);  // warm the basis caches once
    for (auto _ : state) {
        benchmark::DoNotOptimize(project(x, y).z1);
    }
}
BENCHMARK(bm_project)->Args({50, 50})->Args({50, 5})->Args({15, 15});

static void bm_te_test(benchmark::State& state) {
    RngStream rng(2, 0);
    Sample x = sample_normal(rng, 0.0, 1.0, 50);
    Sample y = sample_normal(rng, 0.0, 25.0, 5);
    te_test(x, y, 0.0, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(te_test(x, y, 0.0, 0.05).p_value);
    }
}
BENCHMARK(bm_te_test);

static void bm_welch_test(benchmark::State& state) {
    RngStream rng(3, 0);
    Sample x = sample_normal(rng, 0.0, 1.0, 50);
    Sample y = sample_normal(rng, 0.0, 25.0, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(welch_test(x, y, 0.0, 0.05).p_value);
    }
}
BENCHMARK(bm_welch_test);

static void bm_sweep_cell(benchmark::State& state) {
    SweepConfig cfg;
    cfg.m = 15;
    cfg.n = 15;
    cfg.variance_grid = {{13.0, 13.0}};
    cfg.reps = 1000;
    cfg.methods = {Method::te};
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(cfg).cells.front().rate);
    }
}
BENCHMARK(bm_sweep_cell)->Unit(benchmark::kMillisecond);

static void bm_chi_p_tabulation(benchmark::State& state) {
    for (auto _ : state) {
        ChiPDensity d(static_cast<unsigned>(state.range(0)), 1.5);
        benchmark::DoNotOptimize(d.total_mass());
    }
}
BENCHMARK(bm_chi_p_tabulation)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

static void bm_t_diff_quantile(benchmark::State& state) {
    t_diff_table(9);  // table built once outside the loop
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_diff_table(9).quantile(0.975));
    }
}
BENCHMARK(bm_t_diff_quantile)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
