#include "sumrate/perron.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sumrate/errors.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace sumrate;

namespace {

MatrixXd mat2(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("perron");

TEST_CASE("scalar matrix radius is its entry") {
  for (double c : {0.25, 1.0, 3.5, 1e6}) {
    MatrixXd a(1, 1);
    a << c;
    CHECK(perron::spectral_radius(a) == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("symmetric 2x2 with known eigenvalues") {
  CHECK(perron::spectral_radius(mat2(2, 1, 1, 2)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("2x2 radius matches the characteristic-polynomial root") {
  const MatrixXd a = mat2(1, 2, 3, 4);
  const double expected = 0.5 * (5.0 + std::sqrt(33.0));  // (5+sqrt(33))/2
  const double got = perron::spectral_radius(a);
  CHECK(std::abs(got - expected) <= 1e-10 * expected);
}

TEST_CASE("eigenpair residual and normalization on the 2x2 example") {
  const MatrixXd a = mat2(1, 2, 3, 4);
  const auto pair = perron::perron_pair(a);
  CHECK(pair.right.maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((pair.right.array() > 0.0).all());
  CHECK((pair.left.array() > 0.0).all());
  CHECK(pair.left.dot(pair.right) == doctest::Approx(1.0).epsilon(1e-13));
  const double res_r = (a * pair.right - pair.radius * pair.right).lpNorm<Eigen::Infinity>();
  const double res_l =
      (a.transpose() * pair.left - pair.radius * pair.left).lpNorm<Eigen::Infinity>();
  CHECK(res_r <= 1e-10);
  CHECK(res_l <= 1e-10 * pair.left.lpNorm<Eigen::Infinity>() * pair.radius);
}

TEST_CASE("eigenpair of a symmetric doubly stochastic-like matrix") {
  const auto pair = perron::perron_pair(mat2(2, 1, 1, 2));
  CHECK(pair.radius == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(pair.right[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pair.right[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pair.left[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(pair.left[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("scalar matrix eigenpair") {
  MatrixXd a(1, 1);
  a << 7.0;
  const auto pair = perron::perron_pair(a);
  CHECK(pair.radius == doctest::Approx(7.0));
  CHECK(pair.right[0] == doctest::Approx(1.0));
  CHECK(pair.left[0] == doctest::Approx(1.0));
}

TEST_CASE("radius agrees with dense eigensolver on random matrices up to 4x4") {
  std::mt19937_64 rng(20240817ULL);
  std::uniform_int_distribution<int> size(1, 4);
  for (int draw = 0; draw < 1000; ++draw) {
    const MatrixXd a = oracles::random_positive_matrix(rng, size(rng), 0.1, 10.0);
    const double reference = oracles::dense_radius(a);
    const double got = perron::spectral_radius(a);
    CHECK(std::abs(got - reference) <= 1e-8 * reference);
  }
}

TEST_CASE("eigenpair invariants hold on random positive matrices") {
  std::mt19937_64 rng(77001ULL);
  std::uniform_int_distribution<int> size(2, 8);
  const double tol = 1e-12;
  for (int draw = 0; draw < 1000; ++draw) {
    const MatrixXd a = oracles::random_positive_matrix(rng, size(rng), 0.1, 10.0);
    const auto pair = perron::perron_pair(a, tol);
    CHECK((pair.right.array() > 0.0).all());
    CHECK((pair.left.array() > 0.0).all());
    CHECK(pair.right.lpNorm<Eigen::Infinity>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pair.left.dot(pair.right) == doctest::Approx(1.0).epsilon(1e-12));
    const double res =
        (a * pair.right - pair.radius * pair.right).lpNorm<Eigen::Infinity>();
    CHECK(res <= tol * pair.radius * pair.right.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("radius scales linearly and is transpose-invariant") {
  std::mt19937_64 rng(13579ULL);
  for (int draw = 0; draw < 200; ++draw) {
    const MatrixXd a = oracles::random_positive_matrix(rng, 2 + draw % 5, 0.1, 5.0);
    const double rho = perron::spectral_radius(a);
    for (double alpha : {0.5, 2.0, 10.0}) {
      CHECK(perron::spectral_radius(alpha * a) == doctest::Approx(alpha * rho).epsilon(1e-9));
    }
    CHECK(perron::spectral_radius(a.transpose()) == doctest::Approx(rho).epsilon(1e-9));
  }
}

TEST_CASE("radius is monotone in the entries") {
  std::mt19937_64 rng(24680ULL);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  for (int draw = 0; draw < 200; ++draw) {
    const int n = 2 + draw % 4;
    const MatrixXd a = oracles::random_positive_matrix(rng, n, 0.1, 5.0);
    MatrixXd b = a;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        b(i, j) += bump(rng);
      }
    }
    CHECK(perron::spectral_radius(a) <= perron::spectral_radius(b) + 1e-9);
  }
}

TEST_CASE("inverse-Z pattern detection on closed-form 2x2 inverses") {
  // inv([[2,1],[1,2]]) = (1/3)[[2,-1],[-1,2]]: off-diagonals negative.
  CHECK(perron::is_inverse_z(mat2(2, 1, 1, 2)));
  // inv([[1,2],[2,1]]) = (1/-3)[[1,-2],[-2,1]]: off-diagonals positive.
  CHECK_FALSE(perron::is_inverse_z(mat2(1, 2, 2, 1)));
  MatrixXd one(1, 1);
  one << 0.3;
  CHECK(perron::is_inverse_z(one));
}

TEST_CASE("singular input to the inverse pattern check") {
  CHECK_THROWS_AS(perron::is_inverse_z(mat2(1, 1, 1, 1)), SingularError);
}

TEST_CASE("input validation") {
  MatrixXd bad(2, 2);
  bad << 1.0, -0.5, 2.0, 1.0;
  CHECK_THROWS_AS(perron::spectral_radius(bad), DomainError);
  MatrixXd zero = MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(perron::spectral_radius(zero), DomainError);
  MatrixXd rect(2, 3);
  rect.setOnes();
  CHECK_THROWS_AS(perron::spectral_radius(rect), DimensionError);
  CHECK_THROWS_AS(perron::spectral_radius(mat2(1, 1, 1, 2), -1.0), DomainError);
  CHECK_THROWS_AS(perron::spectral_radius(mat2(1, 1, 1, 2), 1e-12, 0), DomainError);
  CHECK_THROWS_AS(perron::perron_pair(bad), DomainError);
  CHECK_THROWS_AS(perron::is_inverse_z(bad), DomainError);
}

TEST_SUITE_END();
