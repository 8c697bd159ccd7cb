#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bfexact/bf_tests.hpp"

namespace bfexact {

/// One size/power sweep over a variance grid.
struct SweepConfig {
    std::size_t m = 15, n = 15;
    std::vector<std::pair<double, double>> variance_grid;  // (sigma1^2, sigma2^2)
    double mu_diff = 0.0;  // mu1 - mu2; 0 for size, 2 for the power setting
    double alpha = 0.05;
    std::size_t reps = 20000;
    std::uint64_t seed = 1;
    std::vector<Method> methods = {Method::te, Method::tn, Method::welch, Method::paired,
                                   Method::scheffe};
    unsigned threads = 0;  // 0 = auto (hardware, capped by BF_EXACT_THREADS)
};

/// The 25 variance pairs (k, 26-k), k = 1..25.
std::vector<std::pair<double, double>> canonical_grid();

struct SweepCell {
    Method method;
    double sigma1_sq, sigma2_sq;
    std::size_t m, n;
    double mu_diff;
    double alpha;
    std::size_t reps;
    double rate;  // rejections / reps
    double se;    // sqrt(rate (1-rate) / reps)
    std::size_t rejections;
    std::size_t degenerate_count;  // failed replications, reported not redrawn
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells;  // grid-major, method order as configured
};

/// Runs the sweep. Replications are independent streams keyed by
/// (grid index, replication), so the result is identical for any thread
/// count. X is drawn with mean 0 and Y with mean -mu_diff.
SweepResult run_sweep(const SweepConfig& config);

/// CSV with header:
/// method,sigma1_sq,sigma2_sq,m,n,mu_diff,alpha,reps,rate,se,degenerate_count
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// The four sample-size settings of the size/power study.
std::vector<std::pair<std::size_t, std::size_t>> figure_size_pairs();

/// Size (mu_diff = 0) and power (mu_diff = 2) sweeps over the canonical
/// grid for each of the four size pairs; 8 results, size tables first.
std::vector<SweepResult> figure_tables(std::size_t reps, std::uint64_t seed, double alpha = 0.05,
                                       unsigned threads = 0);

/// Worker-count resolution used by run_sweep (exposed for tests):
/// hardware concurrency, capped by the BF_EXACT_THREADS environment
/// variable when it is set to a positive value.
unsigned resolve_thread_count(unsigned requested);

}  // namespace bfexact
