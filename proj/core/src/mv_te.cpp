#include "bfexact/mv_te.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

#include "bfexact/distributions.hpp"
#include "bfexact/errors.hpp"
#include "bfexact/transform.hpp"

namespace bfexact {
namespace {

// Solve S w = v through the LDL^T factorization, rejecting near-singular S.
Eigen::VectorXd spd_solve(const Eigen::MatrixXd& s, const Eigen::VectorXd& v) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() >= 1e-12))
        throw conditioning_error("scatter matrix is numerically singular");
    return ldlt.solve(v);
}

}  // namespace

MvOutcome mv_te_test(const MvSample& x, const MvSample& y, const Eigen::VectorXd& delta0,
                     double alpha) {
    Eigen::Index m = x.rows(), n = y.rows(), p = x.dim();
    if (y.dim() != p || delta0.size() != p)
        throw std::domain_error("mv_te_test: dimension mismatch");
    if (m < n) throw std::domain_error("mv_te_test: first sample must be the larger one");
    if (n <= p)
        throw std::domain_error("mv_te_test: smaller sample size must exceed the dimension");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("mv_te_test: alpha outside (0,1)");

    Eigen::MatrixXd z = project_columns(x.data, y.data);  // n x p
    Eigen::VectorXd z1 = z.row(0).transpose();
    Eigen::MatrixXd rest = z.bottomRows(n - 1);
    Eigen::MatrixXd s = rest.transpose() * rest;  // sum of outer products

    Eigen::VectorXd diff = z1 - delta0;
    double quad = diff.dot(spd_solve(s, diff));

    MvOutcome out;
    out.t2 = static_cast<double>(n - 1) * quad;
    out.df1 = p;
    out.df2 = n - p;
    out.f_stat = out.t2 * static_cast<double>(n - p) /
                 (static_cast<double>(p) * static_cast<double>(n - 1));
    out.p_value = 1.0 - f_cdf(out.f_stat, static_cast<double>(p), static_cast<double>(n - p));
    out.center = z1;
    out.shape = 0.5 * (s + s.transpose());
    out.radius2 = static_cast<double>(p) / static_cast<double>(n - p) *
                  f_quantile(1.0 - alpha, static_cast<double>(p), static_cast<double>(n - p));
    out.alpha = alpha;
    out.n = n;
    return out;
}

MvConfidenceRegion::MvConfidenceRegion(const MvOutcome& outcome, double alpha)
    : center_(outcome.center), shape_(outcome.shape) {
    radius2_ = static_cast<double>(outcome.df1) / static_cast<double>(outcome.df2) *
               f_quantile(1.0 - alpha, static_cast<double>(outcome.df1),
                          static_cast<double>(outcome.df2));
}

double MvConfidenceRegion::mahalanobis2(const Eigen::VectorXd& delta) const {
    Eigen::VectorXd d = center_ - delta;
    return d.dot(spd_solve(shape_, d));
}

bool MvConfidenceRegion::contains(const Eigen::VectorXd& delta) const {
    return mahalanobis2(delta) <= radius2_;
}

MvConfidenceRegion mv_confidence_region(const MvOutcome& outcome, double alpha) {
    return MvConfidenceRegion(outcome, alpha);
}

}  // namespace bfexact
