#pragma once

// Shared helpers for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace testsupport {

// Kolmogorov-Smirnov distance between the empirical CDF of `draws` and a
// model CDF, evaluated by scanning the sorted sample. Exact (not a grid
// approximation): at each order statistic the sup is attained at one of the
// two one-sided gaps.
inline double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        double f = cdf(draws[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// KS distance evaluated on a fixed probe grid instead of every order
// statistic; used when a single model-CDF evaluation is expensive. The
// probes must span the support densely.
inline double ks_distance_grid(std::vector<double> draws, const std::vector<double>& probes,
                               const std::function<double(double)>& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (double x : probes) {
        auto lo = std::lower_bound(draws.begin(), draws.end(), x);
        double emp = static_cast<double>(lo - draws.begin()) / n;
        d = std::max(d, std::fabs(emp - cdf(x)));
    }
    return d;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
    double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace testsupport
