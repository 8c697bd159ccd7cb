#include "bfexact/two_stage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bfexact/bf_tests.hpp"
#include "bfexact/distributions.hpp"
#include "bfexact/errors.hpp"

namespace bfexact {
namespace {

double mean_of(const Sample& s) {
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double unbiased_var(const Sample& s) {
    double m = mean_of(s);
    double ss = 0.0;
    for (double v : s) ss += (v - m) * (v - m);
    return ss / static_cast<double>(s.size() - 1);
}

}  // namespace

long long strict_ceiling(double x) {
    double c = std::ceil(x);
    if (c == x) return static_cast<long long>(c) + 1;
    return static_cast<long long>(c);
}

StageOnePlan stage_one(const Sample& x0, const Sample& y0, double h) {
    if (x0.size() < 2 || y0.size() < 2 || x0.size() != y0.size())
        throw std::domain_error("stage_one: pilot samples must share a size >= 2");
    if (!(h > 0.0)) throw std::domain_error("stage_one: h must be positive");

    StageOnePlan plan;
    plan.n0 = x0.size();
    plan.h = h;
    plan.mean_x0 = mean_of(x0);
    plan.mean_y0 = mean_of(y0);
    plan.s1_sq = unbiased_var(x0);
    plan.s2_sq = unbiased_var(y0);
    if (plan.s1_sq == 0.0 || plan.s2_sq == 0.0)
        throw degenerate_data_error("stage_one: pilot sample has zero variance");

    auto size_for = [&](double s_sq) {
        long long needed = strict_ceiling(s_sq / (h * h));
        return static_cast<std::size_t>(
            std::max<long long>(static_cast<long long>(plan.n0) + 1, needed));
    };
    plan.n1 = size_for(plan.s1_sq);
    plan.n2 = size_for(plan.s2_sq);
    return plan;
}

std::pair<double, double> solve_weights(std::size_t n0, std::size_t n_final, double s_sq,
                                        double h) {
    if (n_final <= n0) throw std::domain_error("solve_weights: n_final must exceed n0");
    if (!(s_sq > 0.0) || !(h > 0.0)) throw std::domain_error("solve_weights: bad scale inputs");

    double k = static_cast<double>(n0);
    double r = static_cast<double>(n_final - n0);
    double c = h * h / s_sq;
    // Eliminating w1 leaves r(r+k) w2^2 - 2r w2 + (1 - kc) = 0; the
    // discriminant is nonnegative exactly when n_final >= s_sq / h^2.
    double disc = 1.0 - (r + k) * (1.0 - k * c) / r;
    if (disc < 0.0) {
        if (disc > -1e-12) disc = 0.0;  // boundary case n_final == s_sq/h^2
        else
            throw std::domain_error(
                "solve_weights: n_final below s_sq/h^2, no real solution");
    }
    double root = std::sqrt(disc);
    auto w1_of = [&](double w2) { return (1.0 - r * w2) / k; };
    double hi = (1.0 + root) / (r + k);
    double lo = (1.0 - root) / (r + k);
    // Prefer an all-positive pair; among those take the one with w2 >= w1,
    // which is the '+' root and matches the equal-weight boundary.
    if (w1_of(hi) > 0.0) return {w1_of(hi), hi};
    if (lo > 0.0 && w1_of(lo) > 0.0) return {w1_of(lo), lo};
    return {w1_of(hi), hi};
}

ChapmanOutcome stage_two_ci(const StageOnePlan& plan, const Sample& x0, const Sample& y0,
                            const Sample& x_full, const Sample& y_full, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("stage_two_ci: alpha outside (0,1)");
    if (x_full.size() != plan.n1 || y_full.size() != plan.n2)
        throw protocol_error("stage_two_ci: full samples do not match the planned sizes");
    for (std::size_t i = 0; i < plan.n0; ++i) {
        if (x_full[i] != x0[i] || y_full[i] != y0[i])
            throw protocol_error("stage_two_ci: full samples must extend the stage-one samples");
    }

    auto [a1, a2] = solve_weights(plan.n0, plan.n1, plan.s1_sq, plan.h);
    auto [b1, b2] = solve_weights(plan.n0, plan.n2, plan.s2_sq, plan.h);

    auto weighted = [&](const Sample& s, double w_pilot, double w_extra) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) acc += (i < plan.n0 ? w_pilot : w_extra) * s[i];
        return acc;
    };

    ChapmanOutcome out;
    out.weighted_mean_x = weighted(x_full, a1, a2);
    out.weighted_mean_y = weighted(y_full, b1, b2);
    out.c_quantile = t_diff_quantile(static_cast<unsigned>(plan.n0 - 1), 1.0 - alpha / 2.0);
    out.half_width = out.c_quantile * plan.h;
    double center = out.weighted_mean_x - out.weighted_mean_y;
    out.ci_low = center - out.half_width;
    out.ci_high = center + out.half_width;
    return out;
}

ChapmanCompareResult chapman_vs_te(const ChapmanCompareConfig& config) {
    if (config.reps < 1) throw std::domain_error("chapman_vs_te: reps must be positive");
    if (config.n0 < 2) throw std::domain_error("chapman_vs_te: n0 must be >= 2");

    double c = t_diff_quantile(static_cast<unsigned>(config.n0 - 1), 1.0 - config.alpha / 2.0);
    double h = config.d / c;  // fixed-width target: half width c*h = d
    double true_delta = config.mu1 - config.mu2;

    double sum_chapman_width = 0.0, sum_te_width = 0.0;
    double sum_n1 = 0.0, sum_n2 = 0.0;
    std::size_t cover_chapman = 0, cover_te = 0;

    for (std::size_t r = 0; r < config.reps; ++r) {
        RngStream rng(config.seed, r);
        Sample x0 = sample_normal(rng, config.mu1, config.sigma1_sq, config.n0);
        Sample y0 = sample_normal(rng, config.mu2, config.sigma2_sq, config.n0);
        StageOnePlan plan = stage_one(x0, y0, h);

        Sample x_full = x0, y_full = y0;
        Sample x_extra = sample_normal(rng, config.mu1, config.sigma1_sq, plan.n1 - plan.n0);
        Sample y_extra = sample_normal(rng, config.mu2, config.sigma2_sq, plan.n2 - plan.n0);
        x_full.insert(x_full.end(), x_extra.begin(), x_extra.end());
        y_full.insert(y_full.end(), y_extra.begin(), y_extra.end());

        ChapmanOutcome chap = stage_two_ci(plan, x0, y0, x_full, y_full, config.alpha);
        sum_chapman_width += chap.ci_high - chap.ci_low;
        if (chap.ci_low <= true_delta && true_delta <= chap.ci_high) ++cover_chapman;

        TestOutcome te = te_test(x_full, y_full, 0.0, config.alpha);
        sum_te_width += te.ci_high - te.ci_low;
        if (te.ci_low <= true_delta && true_delta <= te.ci_high) ++cover_te;

        sum_n1 += static_cast<double>(plan.n1);
        sum_n2 += static_cast<double>(plan.n2);
    }

    double reps = static_cast<double>(config.reps);
    ChapmanCompareResult res;
    res.config = config;
    res.chapman_mean_width = sum_chapman_width / reps;
    res.te_mean_width = sum_te_width / reps;
    res.chapman_coverage = static_cast<double>(cover_chapman) / reps;
    res.te_coverage = static_cast<double>(cover_te) / reps;
    res.mean_n1 = sum_n1 / reps;
    res.mean_n2 = sum_n2 / reps;
    res.reps = config.reps;
    res.combined_method_exact = false;
    return res;
}

}  // namespace bfexact
