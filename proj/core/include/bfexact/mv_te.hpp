#pragma once

#include <Eigen/Core>

namespace bfexact {

/// Observations-by-dimension matrix of one multivariate normal sample.
struct MvSample {
    Eigen::MatrixXd data;  // rows x p

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index dim() const { return data.cols(); }
};

/// Hotelling-type outcome for H0: mu1 - mu2 = delta0.
struct MvOutcome {
    double t2;           // (n-1) (z1-delta0)^T S^{-1} (z1-delta0)
    double f_stat;       // t2 * (n-p) / (p (n-1))
    Eigen::Index df1;    // p
    Eigen::Index df2;    // n - p
    double p_value;
    Eigen::VectorXd center;  // projected mean difference z1
    Eigen::MatrixXd shape;   // S, symmetric positive definite
    double radius2;          // (p/(n-p)) F_{p,n-p,1-alpha}
    double alpha;
    Eigen::Index n;          // smaller sample size
};

/// Two-sample mean-vector test via the column-wise orthogonal projection and
/// the Hotelling pivot. Requires m >= n > p.
MvOutcome mv_te_test(const MvSample& x, const MvSample& y, const Eigen::VectorXd& delta0,
                     double alpha);

/// Ellipsoidal confidence region for the mean difference:
/// { delta : (center-delta)^T S^{-1} (center-delta) <= radius2 }.
class MvConfidenceRegion {
  public:
    MvConfidenceRegion(const MvOutcome& outcome, double alpha);

    const Eigen::VectorXd& center() const { return center_; }
    double radius2() const { return radius2_; }

    bool contains(const Eigen::VectorXd& delta) const;

    /// Quadratic form (center-delta)^T S^{-1} (center-delta).
    double mahalanobis2(const Eigen::VectorXd& delta) const;

  private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd shape_;
    double radius2_;
};

MvConfidenceRegion mv_confidence_region(const MvOutcome& outcome, double alpha);

}  // namespace bfexact
