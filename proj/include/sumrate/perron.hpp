#pragma once

#include <Eigen/Core>

namespace sumrate::perron {

// Perron eigendata of an entrywise-positive square matrix. `right` is
// normalized to ||right||_inf == 1 and `left` is scaled so that
// left.dot(right) == 1; both are entrywise positive.
struct PerronPair {
  double radius = 0.0;
  Eigen::VectorXd right;
  Eigen::VectorXd left;
};

// Spectral radius of an entrywise-positive matrix by power iteration with
// infinity-norm normalization, all-ones start. `tol` bounds the relative
// residual ||A x - radius x||_inf / (radius ||x||_inf) at exit.
double spectral_radius(const Eigen::MatrixXd& a, double tol = 1e-12,
                       int max_iter = 100000);

// Right and left Perron vectors plus the radius; the left vector comes from
// a power iteration on the transpose.
PerronPair perron_pair(const Eigen::MatrixXd& a, double tol = 1e-12,
                       int max_iter = 100000);

// True when the inverse of `m` has all off-diagonal entries <= tol.
// (The small positive tol absorbs rounding in the inversion.)
bool is_inverse_z(const Eigen::MatrixXd& m, double tol = 1e-12);

}  // namespace sumrate::perron
