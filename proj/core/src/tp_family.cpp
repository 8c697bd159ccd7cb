#include "bfexact/tp_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "bfexact/errors.hpp"
#include "bfexact/special.hpp"
#include "bfexact/transform.hpp"

namespace bfexact {
namespace {

double prefactor(double p) { return (1.0 / std::sqrt(2.0 * std::numbers::pi)) * (2.0 / p); }

// 7-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double gl_x[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                            0.0,
                            0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr double gl_w[7] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                            0.4179591836734694,
                            0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

// Local cubic Hermite through a uniform table. Unlike a global spline fit,
// exact zeros in the data stay exact zeros here; the far tail of the table
// must not pick up solve roundoff because downstream integrals weight it by
// s^{n-1}.
double hermite_eval(const std::vector<double>& tab, double ds, double s) {
    if (s <= 0.0) return tab.front();
    std::size_t i = static_cast<std::size_t>(s / ds);
    if (i >= tab.size() - 1) return tab.back();
    double t = (s - ds * static_cast<double>(i)) / ds;
    double y0 = tab[i], y1 = tab[i + 1];
    // Slopes from 5-point central differences where available (4th order),
    // falling back to 3-point near the edges.
    auto slope = [&](std::size_t j) {
        if (j >= 2 && j + 2 < tab.size())
            return (-tab[j + 2] + 8.0 * tab[j + 1] - 8.0 * tab[j - 1] + tab[j - 2]) / 12.0;
        if (j >= 1 && j + 1 < tab.size()) return 0.5 * (tab[j + 1] - tab[j - 1]);
        return (j == 0) ? tab[1] - tab[0] : tab[j] - tab[j - 1];
    };
    double m0 = slope(i);
    double m1 = slope(i + 1);
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
}

}  // namespace

double chi_p_1_pdf(double x, double p) {
    if (!(p > 0.0)) throw std::domain_error("chi_p_1_pdf: p must be positive");
    if (x <= 0.0) return 0.0;
    return prefactor(p) * std::exp(-0.5 * std::pow(x, 2.0 / p)) * std::pow(x, 1.0 / p - 1.0);
}

ChiPDensity::ChiPDensity(unsigned n, double p) : n_(n), p_(p) {
    if (n < 1) throw std::domain_error("ChiPDensity: n must be >= 1");
    if (!(p > 0.0)) throw std::domain_error("ChiPDensity: p must be positive");

    // Support cut: the sum exceeds s_max^p only if some |X_i| exceeds
    // s_max / n^{1/p}; choose that threshold so the missed mass is ~1e-12.
    double z_star = normal_quantile(1.0 - 0.5e-12 / static_cast<double>(n));
    s_max_ = std::pow(static_cast<double>(n), 1.0 / p) * z_star;

    // The intermediate tables have features at unit scale in s regardless of
    // how wide the final support is (s_max grows like n^{1/p}), so the step
    // size, not the point count, is what fixes the spline accuracy.
    const std::size_t points =
        std::max<std::size_t>(6401, static_cast<std::size_t>(std::ceil(s_max_ / 0.02)) + 1);
    ds_ = s_max_ / static_cast<double>(points - 1);
    g_.resize(points);

    const double c = prefactor(p);
    // Smooth part of the one-variate law in the root scale: c * exp(-s^2/2).
    std::vector<double> cur(points);
    for (std::size_t i = 0; i < points; ++i) {
        double s = ds_ * static_cast<double>(i);
        cur[i] = c * std::exp(-0.5 * s * s);
    }

    boost::math::quadrature::tanh_sinh<double> integrator(10);
    for (unsigned k = 1; k < n; ++k) {
        // Convolution step in the root scale: a beta-weighted average of the
        // current table against the one-variate factor.
        double a = static_cast<double>(k) / p - 1.0;  // weight t^a
        double b = 1.0 / p - 1.0;                     // weight (1-t)^b
        std::vector<double> next(points);
        // Integrand over t in (0,1) with possible singularities at both
        // ends; split at 1/2 so each half is singular only where the
        // integration variable itself is small.
        auto kernel = [&](double t, double tc, double s) {
            double ta = (a == 0.0) ? 1.0 : std::pow(t, a);
            double tb = (b == 0.0) ? 1.0 : std::pow(tc, b);
            double arg = s * std::pow(t, 1.0 / p);
            double gk = (arg >= s_max_) ? 0.0 : hermite_eval(cur, ds_, arg);
            double one = std::exp(-0.5 * s * s * std::pow(tc, 2.0 / p));
            return ta * tb * gk * one;
        };
        for (std::size_t i = 0; i < points; ++i) {
            double s = ds_ * static_cast<double>(i);
            double err1 = 0.0, err2 = 0.0;
            double lower = integrator.integrate(
                [&](double t) { return kernel(t, 1.0 - t, s); }, 0.0, 0.5, 1e-10, &err1);
            double upper = integrator.integrate(
                [&](double u) { return kernel(1.0 - u, u, s); }, 0.0, 0.5, 1e-10, &err2);
            if (err1 > 1e-7 || err2 > 1e-7)
                throw numeric_error("chi^p_n tabulation: convolution quadrature did not converge");
            next[i] = c * (lower + upper);
        }
        cur = std::move(next);
    }
    g_ = std::move(cur);

    // CDF prefix in the root scale: integrate p s^{n-1} g(s).
    cdf_prefix_.assign(points, 0.0);
    double nn = static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 1; i < points; ++i) {
        double lo = ds_ * static_cast<double>(i - 1);
        double half = 0.5 * ds_;
        double mid = lo + half;
        double piece = 0.0;
        for (int j = 0; j < 7; ++j) {
            double s = mid + half * gl_x[j];
            piece += gl_w[j] * p_ * std::pow(s, nn - 1.0) * hermite_eval(g_, ds_, s);
        }
        acc += piece * half;
        cdf_prefix_[i] = acc;
    }
    total_mass_ = acc;
    if (std::fabs(total_mass_ - 1.0) > 1e-6)
        throw numeric_error("chi^p_n tabulation: density mass deviates from 1 beyond tolerance");
}

double ChiPDensity::upper_truncation() const noexcept { return std::pow(s_max_, p_); }

double ChiPDensity::interp_g(double s) const {
    if (s >= s_max_) return 0.0;
    return hermite_eval(g_, ds_, s);
}

double ChiPDensity::smooth_part(double s) const { return interp_g(s); }

double ChiPDensity::pdf(double y) const {
    if (y <= 0.0) return 0.0;
    double s = std::pow(y, 1.0 / p_);
    if (s >= s_max_) return 0.0;
    return std::pow(y, static_cast<double>(n_) / p_ - 1.0) * interp_g(s);
}

double ChiPDensity::cdf(double y) const {
    if (y <= 0.0) return 0.0;
    double s = std::pow(y, 1.0 / p_);
    if (s >= s_max_) return 1.0;
    std::size_t i = static_cast<std::size_t>(s / ds_);
    double lo = ds_ * static_cast<double>(i);
    double half = 0.5 * (s - lo);
    double mid = lo + half;
    double nn = static_cast<double>(n_);
    double piece = 0.0;
    for (int j = 0; j < 7; ++j) {
        double u = mid + half * gl_x[j];
        piece += gl_w[j] * p_ * std::pow(u, nn - 1.0) * interp_g(u);
    }
    double v = cdf_prefix_[i] + piece * half;
    return std::clamp(v, 0.0, 1.0);
}

double ChiPDensity::root_moment() const {
    double nn = static_cast<double>(n_);
    double acc = 0.0;
    for (std::size_t i = 1; i < g_.size(); ++i) {
        double lo = ds_ * static_cast<double>(i - 1);
        double half = 0.5 * ds_;
        double mid = lo + half;
        for (int j = 0; j < 7; ++j) {
            double s = mid + half * gl_x[j];
            acc += gl_w[j] * half * p_ * std::pow(s, nn) * interp_g(s);
        }
    }
    return acc;
}

double ChiPDensity::ratio_pdf(double z) const {
    if (!(z > 0.0)) throw std::domain_error("ratio_pdf: z must be positive");
    double nn = static_cast<double>(n_);
    double zfac = std::pow(z, 2.0 / p_);
    double acc = 0.0;
    for (std::size_t i = 1; i < g_.size(); ++i) {
        double lo = ds_ * static_cast<double>(i - 1);
        double half = 0.5 * ds_;
        double mid = lo + half;
        for (int j = 0; j < 7; ++j) {
            double s = mid + half * gl_x[j];
            acc += gl_w[j] * half * std::pow(s, nn) * interp_g(s) * std::exp(-0.5 * s * s * zfac);
        }
    }
    return p_ * prefactor(p_) * std::pow(z, 1.0 / p_ - 1.0) * acc;
}

double ChiPDensity::ratio_cdf(double z) const {
    if (z <= 0.0) return 0.0;
    // P(chi^p_1 <= z W) = E[ 2 Phi((z W)^{1/p}) - 1 ] over W = chi^p_n.
    double nn = static_cast<double>(n_);
    double zroot = std::pow(z, 1.0 / p_);
    double acc = 0.0;
    for (std::size_t i = 1; i < g_.size(); ++i) {
        double lo = ds_ * static_cast<double>(i - 1);
        double half = 0.5 * ds_;
        double mid = lo + half;
        for (int j = 0; j < 7; ++j) {
            double s = mid + half * gl_x[j];
            acc += gl_w[j] * half * p_ * std::pow(s, nn - 1.0) * interp_g(s) *
                   (2.0 * normal_cdf(zroot * s) - 1.0);
        }
    }
    return std::clamp(acc, 0.0, 1.0);
}

double ChiPDensity::ratio_quantile(double prob) const {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("ratio_quantile: prob outside (0,1)");
    double lo = 1.0, hi = 1.0;
    while (ratio_cdf(lo) > prob) {
        lo *= 0.5;
        if (lo < 1e-300) throw numeric_error("ratio_quantile: bracketing failed at 0");
    }
    while (ratio_cdf(hi) < prob) {
        hi *= 2.0;
        if (hi > 1e300) throw numeric_error("ratio_quantile: bracketing failed at infinity");
    }
    auto f = [&](double z) { return ratio_cdf(z) - prob; };
    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tol(48);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
    return 0.5 * (r.first + r.second);
}

const ChiPDensity& chi_p_n_pdf(unsigned n, double p) {
    static std::map<std::pair<unsigned, std::uint64_t>, std::unique_ptr<ChiPDensity>> cache;
    static std::mutex m;
    std::uint64_t pbits;
    std::memcpy(&pbits, &p, sizeof(pbits));
    auto key = std::make_pair(n, pbits);
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<ChiPDensity>(n, p)).first;
    return *it->second;
}

double f_p_pdf(double z, unsigned n, double p) { return chi_p_n_pdf(n, p).ratio_pdf(z); }

double tp_quantile(unsigned n, double p, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("tp_quantile: alpha outside (0,1)");
    // The root-finding is costly and simulations request the same quantile
    // for every replication, so solved values are memoized.
    static std::map<std::tuple<unsigned, std::uint64_t, double>, double> cache;
    static std::mutex m;
    std::uint64_t pbits;
    std::memcpy(&pbits, &p, sizeof(pbits));
    auto key = std::make_tuple(n, pbits, alpha);
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double q = chi_p_n_pdf(n, p).ratio_quantile(1.0 - alpha);
    std::lock_guard<std::mutex> lock(m);
    cache.emplace(key, q);
    return q;
}

double tp_expectation(unsigned n, double p) { return chi_p_n_pdf(n, p).root_moment(); }

TpModel ci_length_expectation(unsigned n, double p, double alpha) {
    const ChiPDensity& d = chi_p_n_pdf(n, p);
    TpModel m;
    m.p = p;
    m.n = n;
    m.alpha = alpha;
    m.q_alpha = d.ratio_quantile(1.0 - alpha);
    m.expectation = d.root_moment();
    m.length = 2.0 * std::pow(m.q_alpha, 1.0 / p) * m.expectation;
    return m;
}

StationarityReport stationarity_check(unsigned n, double alpha, double h,
                                      const std::vector<double>& p_grid) {
    if (!(h > 0.0 && h <= 0.5)) throw std::domain_error("stationarity_check: h outside (0, 0.5]");
    StationarityReport rep;
    rep.h = h;
    rep.l_at_2 = ci_length_expectation(n, 2.0, alpha).length;
    double lp = ci_length_expectation(n, 2.0 + h, alpha).length;
    double lm = ci_length_expectation(n, 2.0 - h, alpha).length;
    rep.l_deriv_at_2 = (lp - lm) / (2.0 * h);
    rep.p_grid = p_grid;
    rep.l_values.reserve(p_grid.size());
    for (double p : p_grid) rep.l_values.push_back(ci_length_expectation(n, p, alpha).length);
    return rep;
}

LemmaConstants lemma_constants_mc(unsigned n, std::size_t sample_count, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("lemma_constants_mc: n must be >= 1");
    if (sample_count < 100000)
        throw std::domain_error("lemma_constants_mc: need at least 1e5 samples");

    RngStream rng(seed, 0);
    double sum[6] = {0, 0, 0, 0, 0, 0};
    double sumsq[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t r = 0; r < sample_count; ++r) {
        double tot = 0.0, tot_ylny = 0.0, tot_lny = 0.0;
        for (unsigned i = 0; i < n; ++i) {
            double y = rng.chi2_1();
            tot += y;
            double ly = std::log(y);
            tot_ylny += y * ly;
            tot_lny += ly;
        }
        double root = std::sqrt(tot);
        double lt = std::log(tot);
        double v[6] = {root * tot_ylny,  // A
                       root * tot,       // B
                       root * tot_lny,   // C
                       root * tot * lt,  // D
                       root * lt,        // G
                       root};            // F
        for (int j = 0; j < 6; ++j) {
            sum[j] += v[j];
            sumsq[j] += v[j] * v[j];
        }
    }
    double cnt = static_cast<double>(sample_count);
    double mean[6], se[6];
    for (int j = 0; j < 6; ++j) {
        mean[j] = sum[j] / cnt;
        double var = (sumsq[j] - cnt * mean[j] * mean[j]) / (cnt - 1.0);
        se[j] = std::sqrt(var / cnt);
    }
    return LemmaConstants{mean[0], mean[1], mean[2], mean[3], mean[4], mean[5],
                          se[0],   se[1],   se[2],   se[3],   se[4],   se[5],
                          n,       sample_count, seed};
}

IdentityReport integral_identity_checks() {
    boost::math::quadrature::tanh_sinh<double> integrator(12);
    const double uv[] = {0.5, 1.0, 2.0, 3.0};
    IdentityReport rep{0.0, 0.0};
    for (double u : uv) {
        for (double v : uv) {
            double quad_beta =
                integrator.integrate(
                    [&](double x) {
                        return std::pow(x, u - 1.0) * std::pow(1.0 - x, v - 1.0) * std::log(x);
                    },
                    0.0, 0.5, 1e-12) +
                integrator.integrate(
                    [&](double y) {
                        return std::pow(1.0 - y, u - 1.0) * std::pow(y, v - 1.0) * std::log1p(-y);
                    },
                    0.0, 0.5, 1e-12);
            double closed_beta = std::exp(ln_beta(u, v)) * (digamma(u) - digamma(u + v));
            rep.max_err_beta_log = std::max(rep.max_err_beta_log,
                                            std::fabs(quad_beta - closed_beta));

            double cutoff = (60.0 + 15.0 * v) / u;
            double quad_gamma = integrator.integrate(
                [&](double x) {
                    return std::pow(x, v - 1.0) * std::exp(-u * x) * std::log(x);
                },
                0.0, cutoff, 1e-12);
            double closed_gamma =
                std::pow(u, -v) * std::exp(ln_gamma(v)) * (digamma(v) - std::log(u));
            rep.max_err_gamma_log = std::max(rep.max_err_gamma_log,
                                             std::fabs(quad_gamma - closed_gamma));
        }
    }
    return rep;
}

TpTestOutcome tp_test(const Sample& x, const Sample& y, double p, double alpha, double delta0) {
    if (!(p > 0.0)) throw std::domain_error("tp_test: p must be positive");
    if (x.size() < y.size()) {
        TpTestOutcome o = tp_test(y, x, p, alpha, -delta0);
        double lo = -o.ci_high, hi = -o.ci_low;
        o.ci_low = lo;
        o.ci_high = hi;
        o.delta0 = delta0;
        return o;
    }
    auto proj = project(x, y);
    auto n = y.size();
    double w = 0.0;
    for (Eigen::Index i = 1; i < proj.z.size(); ++i) w += std::pow(std::fabs(proj.z(i)), p);
    if (w == 0.0) throw degenerate_data_error("tp_test: projected contrasts are all zero");

    TpTestOutcome out;
    out.p = p;
    out.alpha = alpha;
    out.delta0 = delta0;
    out.statistic = std::pow(std::fabs(proj.z1 - delta0), p) / w;
    out.critical = tp_quantile(static_cast<unsigned>(n - 1), p, alpha);
    out.reject = out.statistic > out.critical;
    double halfwidth = std::pow(out.critical * w, 1.0 / p);
    out.ci_low = proj.z1 - halfwidth;
    out.ci_high = proj.z1 + halfwidth;
    return out;
}

}  // namespace bfexact
