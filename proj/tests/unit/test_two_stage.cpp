#include <cmath>
#include <stdexcept>
#include <vector>

#include "bfexact/distributions.hpp"
#include "bfexact/errors.hpp"
#include "bfexact/rng.hpp"
#include "bfexact/two_stage.hpp"
#include "doctest.h"

using namespace bfexact;

TEST_CASE("strict ceiling maps integers up") {
    CHECK(strict_ceiling(3.2) == 4);
    CHECK(strict_ceiling(4.0) == 5);   // integer boundary: strictly greater
    CHECK(strict_ceiling(26.0) == 27);
    CHECK(strict_ceiling(25.3) == 26);
    CHECK(strict_ceiling(-0.5) == 0);
}

TEST_CASE("stage_one sizing") {
    // pilot with S1^2 = 4: x0 = 0,4,0,4,... around mean 2 gives exactly 4
    Sample x0, y0;
    for (int i = 0; i < 10; ++i) {
        x0.push_back(i % 2 ? 4.0 : 0.0);
        y0.push_back(i % 2 ? 1.0 : 0.0);
    }
    // unbiased variance of 0/4 pattern: 16 * 10/(4 * 9) = 40/9; build an
    // explicit S1^2 = 4 sample instead
    Sample a(10, 0.0);
    double dev = std::sqrt(4.0 * 9.0 / 10.0) / 1.0;  // +-dev pattern has var dev^2 * 10/9
    for (int i = 0; i < 10; ++i) a[i] = (i % 2 ? dev : -dev);
    auto plan = stage_one(a, a, 1.0);
    CHECK(plan.s1_sq == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(plan.n1 == 11);  // max(n0+1, strict_ceiling(4)) = max(11, 5)
    CHECK(plan.n2 == 11);

    // S^2/h^2 = 25.3 -> 26
    Sample b(10, 0.0);
    double dev2 = std::sqrt(25.3 * 9.0 / 10.0);
    for (int i = 0; i < 10; ++i) b[i] = (i % 2 ? dev2 : -dev2);
    auto plan2 = stage_one(b, b, 1.0);
    CHECK(plan2.s1_sq == doctest::Approx(25.3).epsilon(1e-10));
    CHECK(plan2.n1 == 26);

    // integer boundary S^2/h^2 = 26 -> 27 under the strict reading
    Sample c(10, 0.0);
    double dev3 = std::sqrt(26.0 * 9.0 / 10.0);
    for (int i = 0; i < 10; ++i) c[i] = (i % 2 ? dev3 : -dev3);
    CHECK(stage_one(c, c, 1.0).n1 == 27);

    CHECK_THROWS_AS(stage_one(Sample(10, 1.0), a, 1.0), degenerate_data_error);
}

TEST_CASE("solve_weights plug-back") {
    auto [w1, w2] = solve_weights(10, 20, 15.0, 1.0);
    CHECK(10.0 * w1 + 10.0 * w2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(10.0 * w1 * w1 + 10.0 * w2 * w2 == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
    CHECK(w2 >= w1);
    CHECK(w1 > 0.0);
}

TEST_CASE("solve_weights equal-weight boundary") {
    // h^2/s_sq = 1/n_final forces w1 = w2 = 1/n_final
    auto [w1, w2] = solve_weights(10, 25, 25.0, 1.0);
    CHECK(w1 == doctest::Approx(0.04).epsilon(1e-9));
    CHECK(w2 == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("solve_weights infeasible target") {
    CHECK_THROWS_AS(solve_weights(10, 20, 40.0, 1.0), std::domain_error);
}

TEST_CASE("stage_two_ci fixed width and prefix protocol") {
    RngStream rng(71, 0);
    Sample x0 = sample_normal(rng, 0.0, 9.0, 10);
    Sample y0 = sample_normal(rng, 0.0, 4.0, 10);
    double h = 0.5;
    auto plan = stage_one(x0, y0, h);

    Sample x_full = x0, y_full = y0;
    while (x_full.size() < plan.n1) x_full.push_back(rng.normal(0.0, 3.0));
    while (y_full.size() < plan.n2) y_full.push_back(rng.normal(0.0, 2.0));

    auto out = stage_two_ci(plan, x0, y0, x_full, y_full, 0.05);
    double c = t_diff_quantile(9, 0.975);
    CHECK(out.c_quantile == doctest::Approx(c).epsilon(1e-12));
    CHECK(out.half_width == doctest::Approx(c * h).epsilon(1e-12));
    CHECK(out.ci_high - out.ci_low == doctest::Approx(2.0 * c * h).epsilon(1e-12));

    // different stage-two data, same width
    Sample x_alt = x_full;
    for (std::size_t i = 10; i < x_alt.size(); ++i) x_alt[i] += 5.0;
    auto out2 = stage_two_ci(plan, x0, y0, x_alt, y_full, 0.05);
    CHECK(out2.ci_high - out2.ci_low == doctest::Approx(2.0 * c * h).epsilon(1e-12));

    // tampering with the stage-one prefix must fail
    Sample bad = x_full;
    bad[0] += 1.0;
    CHECK_THROWS_AS(stage_two_ci(plan, x0, y0, bad, y_full, 0.05), protocol_error);
}

TEST_CASE("two-stage interval coverage") {
    const std::size_t reps = 20'000;
    const double mu1 = 1.0, mu2 = -0.5, diff = mu1 - mu2;
    const double h = 0.4;
    std::size_t cover = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream rng(72, r);
        Sample x0 = sample_normal(rng, mu1, 9.0, 10);
        Sample y0 = sample_normal(rng, mu2, 1.0, 10);
        auto plan = stage_one(x0, y0, h);
        Sample x_full = x0, y_full = y0;
        while (x_full.size() < plan.n1) x_full.push_back(rng.normal(mu1, 3.0));
        while (y_full.size() < plan.n2) y_full.push_back(rng.normal(mu2, 1.0));
        auto out = stage_two_ci(plan, x0, y0, x_full, y_full, 0.05);
        if (out.ci_low <= diff && diff <= out.ci_high) ++cover;
    }
    double rate = static_cast<double>(cover) / reps;
    CHECK(std::fabs(rate - 0.95) <= 3.0 * std::sqrt(0.95 * 0.05 / reps));
}

TEST_CASE("chapman_vs_te comparison") {
    ChapmanCompareConfig cfg;
    cfg.sigma1_sq = 1.0;
    cfg.sigma2_sq = 25.0;
    cfg.n0 = 10;
    cfg.d = 1.0;
    cfg.reps = 2000;
    cfg.seed = 73;
    auto res = chapman_vs_te(cfg);
    CHECK(res.chapman_mean_width == doctest::Approx(2.0 * cfg.d).epsilon(1e-12));
    CHECK(res.te_mean_width < 2.0 * cfg.d);
    CHECK_FALSE(res.combined_method_exact);

    cfg.n0 = 20;
    cfg.seed = 74;
    auto res20 = chapman_vs_te(cfg);
    CHECK(res20.chapman_mean_width == doctest::Approx(2.0 * cfg.d).epsilon(1e-12));
    CHECK(res20.te_mean_width < 2.0 * cfg.d);
}
