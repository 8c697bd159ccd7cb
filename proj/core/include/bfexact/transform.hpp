#pragma once

#include <Eigen/Core>

#include "bfexact/rng.hpp"

namespace bfexact {

/// Rows of a Helmert-type orthogonal matrix.
///
/// Row 1 is the constant row 1/sqrt(n). Row 2 is the full contrast whose
/// last entry is -(n-1)/sqrt(n(n-1)); the contrasts then shrink, ending with
/// (1/sqrt2, -1/sqrt2, 0, ..., 0). This ordering is canonical here because
/// the projected statistics depend on the basis choice.
struct OrthoBasis {
    Eigen::MatrixXd rows;  // n_rows x n_cols, rows orthonormal

    Eigen::Index n_rows() const { return rows.rows(); }
    Eigen::Index n_cols() const { return rows.cols(); }
};

/// Full n x n basis. n >= 1.
const OrthoBasis& helmert_basis(Eigen::Index n);

/// First n rows of the m x m basis. Requires n <= m.
const OrthoBasis& partial_basis(Eigen::Index n, Eigen::Index m);

/// Z = Q^T x / sqrt(m) - P^T y / sqrt(n) together with the two pieces the
/// tests consume: the first coordinate and the sum of squares of the rest.
struct ProjectedVector {
    Eigen::VectorXd z;
    double z1 = 0.0;
    double ss_rest = 0.0;  // sum_{i>=2} z_i^2
};

/// Project a size-m and a size-n sample. Requires m >= n >= 2; callers with
/// m < n must swap the samples (the error message says so).
ProjectedVector project(const Sample& x, const Sample& y);

/// Column-wise variant for multivariate samples: each column of x (m rows)
/// and y (n rows) is projected exactly as in the univariate case. Returns
/// the n x p matrix of projected rows z_1..z_n.
Eigen::MatrixXd project_columns(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

}  // namespace bfexact
