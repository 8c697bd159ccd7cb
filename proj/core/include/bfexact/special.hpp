#pragma once

namespace bfexact {

/// ln Gamma(x), x > 0.
double ln_gamma(double x);

/// Digamma psi(z), z > 0.
double digamma(double z);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b).
double ln_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
double reg_inc_beta(double a, double b, double x);

/// Standard normal CDF and quantile.
double normal_cdf(double x);
double normal_quantile(double q);

}  // namespace bfexact
