#pragma once

#include <cstdint>
#include <vector>

#include "bfexact/rng.hpp"

namespace bfexact {

/// Density of |X|^p for X standard normal:
/// (1/sqrt(2 pi)) (2/p) exp(-x^{2/p}/2) x^{1/p - 1}, x > 0.
/// Returns 0 for x <= 0; throws for p <= 0.
double chi_p_1_pdf(double x, double p);

/// Tabulated density of sum_{i=1..n} |X_i|^p for iid standard normals.
///
/// Internally the density is stored in the root scale s = y^{1/p}, where the
/// recursion over n is a smooth beta-weighted integral and every downstream
/// integral loses its endpoint singularity. The tabulation is built by
/// repeated 1-D numerical convolution, mathematically identical to the
/// n-fold simplex integral defining the law.
class ChiPDensity {
  public:
    ChiPDensity(unsigned n, double p);

    unsigned n() const noexcept { return n_; }
    double p() const noexcept { return p_; }
    double upper_truncation() const noexcept;  // support cut in y

    /// Density at y (0 for y <= 0).
    double pdf(double y) const;

    /// CDF at y.
    double cdf(double y) const;

    /// Total tabulated mass; 1 up to quadrature error (checked at build
    /// time against 1e-6, breach raises numeric_error).
    double total_mass() const noexcept { return total_mass_; }

    /// E[ (chi^p_n)^{1/p} ].
    double root_moment() const;

    /// Density of the ratio chi^p_1 / chi^p_n at z > 0.
    double ratio_pdf(double z) const;

    /// CDF of the ratio law.
    double ratio_cdf(double z) const;

    /// q with P(ratio <= q) = prob.
    double ratio_quantile(double prob) const;

    /// Smooth part g with pdf(y) = y^{n/p-1} g(y^{1/p}); exposed for tests.
    double smooth_part(double s) const;

  private:
    unsigned n_;
    double p_;
    double s_max_;                      // grid upper end in the root scale
    double ds_;                         // uniform grid step
    std::vector<double> g_;             // smooth part on the s grid
    std::vector<double> cdf_prefix_;    // CDF at the grid nodes
    double total_mass_;

    double interp_g(double s) const;
};

/// Shared cache of tabulations keyed by (n, p).
const ChiPDensity& chi_p_n_pdf(unsigned n, double p);

/// Ratio-law density chi^p_1 / chi^p_n evaluated at z.
double f_p_pdf(double z, unsigned n, double p);

/// (1-alpha) quantile of the ratio law (ratio scale; take the 1/p power for
/// the root scale).
double tp_quantile(unsigned n, double p, double alpha);

/// E[ (chi^p_n)^{1/p} ].
double tp_expectation(unsigned n, double p);

/// Expected confidence-length functional and its ingredients.
struct TpModel {
    double p;
    unsigned n;
    double alpha;
    double q_alpha;      // ratio-law quantile
    double expectation;  // root moment
    double length;       // 2 * q_alpha^{1/p} * expectation
};

TpModel ci_length_expectation(unsigned n, double p, double alpha);

/// Finite-difference check that the length functional is stationary at p=2,
/// plus a grid of values for convexity inspection.
struct StationarityReport {
    double l_at_2;
    double l_deriv_at_2;  // central difference with step h
    double h;
    std::vector<double> p_grid;
    std::vector<double> l_values;
};

StationarityReport stationarity_check(unsigned n, double alpha, double h,
                                      const std::vector<double>& p_grid = {0.5, 1.0, 1.5, 2.0,
                                                                           2.5, 3.0, 4.0});

/// Monte Carlo estimates (with standard errors) of the moment constants of
/// the p=2 law: expectations of (sum Y)^{1/2} times various log weights over
/// iid chi-square(1) draws Y_1..Y_n.
struct LemmaConstants {
    double a, b, c, d, g, f;
    double se_a, se_b, se_c, se_d, se_g, se_f;
    unsigned n;
    std::size_t sample_count;
    std::uint64_t seed;
};

LemmaConstants lemma_constants_mc(unsigned n, std::size_t sample_count, std::uint64_t seed);

/// Quadrature vs closed-form checks of the two log-moment integral
/// identities (beta-log and gamma-log) over small (u,v) grids. Each entry
/// holds the worst absolute discrepancy observed.
struct IdentityReport {
    double max_err_beta_log;   // int_0^1 x^{u-1}(1-x)^{v-1} ln x dx
    double max_err_gamma_log;  // int_0^inf x^{v-1} e^{-ux} ln x dx
};

IdentityReport integral_identity_checks();

/// p-norm analogue of the exact projection test: statistic
/// |z1 - delta0|^p / sum_{i>=2} |z_i|^p against the ratio-law quantile.
struct TpTestOutcome {
    double p;
    double statistic;
    double critical;  // ratio-law (1-alpha) quantile at n-1
    bool reject;
    double ci_low;
    double ci_high;
    double alpha;
    double delta0;
};

TpTestOutcome tp_test(const Sample& x, const Sample& y, double p, double alpha,
                      double delta0 = 0.0);

}  // namespace bfexact
