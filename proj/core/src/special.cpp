#include "bfexact/special.hpp"

#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace bfexact {

double ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: x must be positive");
    return boost::math::lgamma(x);
}

double digamma(double z) {
    if (!(z > 0.0)) throw std::domain_error("digamma: z must be positive");
    return boost::math::digamma(z);
}

double ln_beta(double a, double b) { return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b); }

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a,b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x outside [0,1]");
    return boost::math::ibeta(a, b, x);
}

double normal_cdf(double x) {
    static const boost::math::normal_distribution<double> nd(0.0, 1.0);
    return boost::math::cdf(nd, x);
}

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("normal_quantile: q outside (0,1)");
    static const boost::math::normal_distribution<double> nd(0.0, 1.0);
    return boost::math::quantile(nd, q);
}

}  // namespace bfexact
