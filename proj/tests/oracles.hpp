// Test-only reference implementations. Everything in here is independent of
// the library's own numerics so that agreement between the two is evidence,
// not circularity.
#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Spectral radius via dense QR eigendecomposition (Eigen::EigenSolver).
// Intended for small matrices; shares no code with the power iteration.
inline double dense_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Closed-form spectral radius of a 2x2 matrix from the characteristic
// polynomial x^2 - tr x + det.
inline double quadratic_radius_2x2(const Eigen::MatrixXd& a) {
  const double tr = a(0, 0) + a(1, 1);
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return std::max(std::abs(0.5 * (tr + root)), std::abs(0.5 * (tr - root)));
  }
  return std::sqrt(det);  // complex pair, |lambda| = sqrt(det)
}

// Central-difference gradient with fixed step.
inline Eigen::VectorXd central_diff_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double step = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    xm[i] = x[i] - step;
    g[i] = (f(xp) - f(xm)) / (2.0 * step);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

inline Eigen::MatrixXd random_positive_matrix(std::mt19937_64& rng, int n,
                                              double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = dist(rng);
    }
  }
  return a;
}

inline Eigen::VectorXd random_positive_vector(std::mt19937_64& rng, int n,
                                              double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = dist(rng);
  }
  return v;
}

}  // namespace oracles
