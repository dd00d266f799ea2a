#include "sumrate/perron.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <string>

#include "sumrate/errors.hpp"

namespace sumrate::perron {

namespace {

void require_positive_square(const Eigen::MatrixXd& a, const char* who) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError(std::string(who) + ": matrix must be square and nonempty");
  }
  if (!(a.array() > 0.0).all()) {
    throw DomainError(std::string(who) + ": matrix must be entrywise positive");
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(who) + ": matrix entries must be finite");
  }
}

void require_iter_params(double tol, int max_iter, const char* who) {
  if (!(tol > 0.0)) {
    throw DomainError(std::string(who) + ": tol must be positive");
  }
  if (max_iter < 1) {
    throw DomainError(std::string(who) + ": max_iter must be at least 1");
  }
}

struct PowerResult {
  double radius;
  Eigen::VectorXd vec;  // ||vec||_inf == 1
};

// Power iteration for positive A. The Collatz bounds
//   min_i (Ax)_i / x_i  <=  radius  <=  max_i (Ax)_i / x_i
// hold for every positive x, so the ratio gap is a rigorous enclosure; we
// stop once it closes to tol relative. Returning the pre-multiply vector x
// keeps the exit residual ||A x - radius x||_inf <= (hi-lo)/2 * ||x||_inf.
PowerResult power_iterate(const Eigen::MatrixXd& a, double tol, int max_iter,
                          const char* who) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd y(n);
  for (int it = 0; it < max_iter; ++it) {
    y.noalias() = a * x;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ratio = y[i] / x[i];
      hi = std::max(hi, ratio);
      lo = std::min(lo, ratio);
    }
    if (hi - lo <= tol * hi) {
      return {0.5 * (hi + lo), x};
    }
    x = y / y.maxCoeff();
  }
  throw NonConvergenceError(std::string(who) + ": power iteration did not reach tol within max_iter");
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& a, double tol, int max_iter) {
  require_positive_square(a, "spectral_radius");
  require_iter_params(tol, max_iter, "spectral_radius");
  return power_iterate(a, tol, max_iter, "spectral_radius").radius;
}

PerronPair perron_pair(const Eigen::MatrixXd& a, double tol, int max_iter) {
  require_positive_square(a, "perron_pair");
  require_iter_params(tol, max_iter, "perron_pair");
  const PowerResult right = power_iterate(a, tol, max_iter, "perron_pair");
  const PowerResult left = power_iterate(a.transpose(), tol, max_iter, "perron_pair");
  PerronPair out;
  out.radius = right.radius;
  out.right = right.vec;
  out.left = left.vec / left.vec.dot(right.vec);
  return out;
}

bool is_inverse_z(const Eigen::MatrixXd& m, double tol) {
  require_positive_square(m, "is_inverse_z");
  if (!(tol > 0.0)) {
    throw DomainError("is_inverse_z: tol must be positive");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  // rcond() estimates the reciprocal 1-norm condition number; treat anything
  // at roundoff scale as singular rather than trusting the inverse's signs.
  if (!(lu.rcond() > m.rows() * std::numeric_limits<double>::epsilon())) {
    throw SingularError("is_inverse_z: matrix is numerically singular");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  if (!inv.allFinite()) {
    throw SingularError("is_inverse_z: inversion produced non-finite entries");
  }
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && inv(i, j) > tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace sumrate::perron
