#include "bfexact/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "bfexact/errors.hpp"
#include "bfexact/rng.hpp"

namespace bfexact {

std::vector<std::pair<double, double>> canonical_grid() {
    std::vector<std::pair<double, double>> grid;
    grid.reserve(25);
    for (int k = 1; k <= 25; ++k) grid.emplace_back(static_cast<double>(k), static_cast<double>(26 - k));
    return grid;
}

unsigned resolve_thread_count(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    if (const char* env = std::getenv("BF_EXACT_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

SweepResult run_sweep(const SweepConfig& config) {
    if (config.reps < 1) throw std::domain_error("run_sweep: reps must be positive");
    if (config.m < 2 || config.n < 2) throw std::domain_error("run_sweep: sizes must be >= 2");
    if (config.methods.empty()) throw std::domain_error("run_sweep: no methods selected");
    if (config.variance_grid.empty()) throw std::domain_error("run_sweep: empty variance grid");

    const std::size_t n_grid = config.variance_grid.size();
    const std::size_t n_methods = config.methods.size();

    // Rejection / degenerate counters per (grid, method); plain sums, so the
    // merged result is independent of scheduling.
    std::vector<std::atomic<std::size_t>> rejections(n_grid * n_methods);
    std::vector<std::atomic<std::size_t>> degenerate(n_grid * n_methods);
    for (auto& a : rejections) a.store(0);
    for (auto& a : degenerate) a.store(0);

    auto run_cell = [&](std::size_t g, std::size_t r) {
        auto [s1, s2] = config.variance_grid[g];
        RngStream rng(config.seed, g * config.reps + r);
        Sample x = sample_normal(rng, 0.0, s1, config.m);
        Sample y = sample_normal(rng, -config.mu_diff, s2, config.n);
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            try {
                TestOutcome out;
                switch (config.methods[mi]) {
                    case Method::te: out = te_test(x, y, 0.0, config.alpha); break;
                    case Method::tn: out = tn_test(x, y, 0.0, config.alpha); break;
                    case Method::welch: out = welch_test(x, y, 0.0, config.alpha); break;
                    case Method::paired: out = paired_test(x, y, 0.0, config.alpha, rng); break;
                    case Method::scheffe: out = scheffe_test(x, y, 0.0, config.alpha); break;
                }
                if (out.p_value < config.alpha)
                    rejections[g * n_methods + mi].fetch_add(1, std::memory_order_relaxed);
            } catch (const degenerate_data_error&) {
                degenerate[g * n_methods + mi].fetch_add(1, std::memory_order_relaxed);
            }
        }
    };

    unsigned workers = resolve_thread_count(config.threads);
    const std::size_t total = n_grid * config.reps;
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_cell(i / config.reps, i % config.reps);
    } else {
        std::atomic<std::size_t> cursor{0};
        const std::size_t chunk = 256;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t begin = cursor.fetch_add(chunk);
                    if (begin >= total) return;
                    std::size_t end = std::min(begin + chunk, total);
                    for (std::size_t i = begin; i < end; ++i)
                        run_cell(i / config.reps, i % config.reps);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.config = config;
    result.cells.reserve(n_grid * n_methods);
    for (std::size_t g = 0; g < n_grid; ++g) {
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            SweepCell cell;
            cell.method = config.methods[mi];
            cell.sigma1_sq = config.variance_grid[g].first;
            cell.sigma2_sq = config.variance_grid[g].second;
            cell.m = config.m;
            cell.n = config.n;
            cell.mu_diff = config.mu_diff;
            cell.alpha = config.alpha;
            cell.reps = config.reps;
            cell.rejections = rejections[g * n_methods + mi].load();
            cell.degenerate_count = degenerate[g * n_methods + mi].load();
            cell.rate = static_cast<double>(cell.rejections) / static_cast<double>(config.reps);
            cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) / static_cast<double>(config.reps));
            result.cells.push_back(cell);
        }
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "method,sigma1_sq,sigma2_sq,m,n,mu_diff,alpha,reps,rate,se,degenerate_count\n";
    os.precision(10);
    for (const auto& c : result.cells) {
        os << method_name(c.method) << ',' << c.sigma1_sq << ',' << c.sigma2_sq << ',' << c.m
           << ',' << c.n << ',' << c.mu_diff << ',' << c.alpha << ',' << c.reps << ',' << c.rate
           << ',' << c.se << ',' << c.degenerate_count << '\n';
    }
}

std::vector<std::pair<std::size_t, std::size_t>> figure_size_pairs() {
    return {{50, 50}, {15, 15}, {50, 5}, {7, 5}};
}

std::vector<SweepResult> figure_tables(std::size_t reps, std::uint64_t seed, double alpha,
                                       unsigned threads) {
    std::vector<SweepResult> tables;
    for (double mu_diff : {0.0, 2.0}) {
        for (auto [m, n] : figure_size_pairs()) {
            SweepConfig cfg;
            cfg.m = m;
            cfg.n = n;
            cfg.variance_grid = canonical_grid();
            cfg.mu_diff = mu_diff;
            cfg.alpha = alpha;
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.threads = threads;
            tables.push_back(run_sweep(cfg));
        }
    }
    return tables;
}

}  // namespace bfexact
