#include <Eigen/Core>
#include <cmath>
#include <random>

#include "doctest.h"
#include "instances.hpp"
#include "json.hpp"
#include "sumrate/errors.hpp"
#include "sumrate/hsd.hpp"
#include "sumrate/recover.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace sumrate;
using recover::InterferenceModel;

TEST_SUITE("recover") {

TEST_CASE("model and rate helpers") {
  const InterferenceModel model((MatrixXd(1, 1) << 1.0).finished(),
                                (VectorXd(1) << 1.0).finished(), 1.0);
  // p=1: rate log(1 + 1/(1+1)) = log 1.5
  const VectorXd r = recover::achieved_rates(model, VectorXd::Ones(1));
  CHECK(r[0] == doctest::Approx(std::log(1.5)).epsilon(1e-15));

  CHECK_THROWS_AS(InterferenceModel(MatrixXd::Ones(2, 2), VectorXd::Ones(3), 1.0),
                  DimensionError);
  CHECK_THROWS_AS(InterferenceModel(-MatrixXd::Ones(2, 2), VectorXd::Ones(2), 1.0),
                  DomainError);
  CHECK_THROWS_AS(InterferenceModel(MatrixXd::Ones(2, 2), VectorXd::Ones(2), 0.0),
                  DomainError);
  CHECK_THROWS_AS(recover::achieved_rates(model, -VectorXd::Ones(1)), DomainError);
  CHECK_THROWS_AS(recover::achieved_rates(model, VectorXd::Ones(2)), DimensionError);
}

TEST_CASE("scalar target hits the closed form") {
  // D* = e^{ln 1.5} - 1 = 0.5; q = 0.5 (q + 1) has fixed point q = 1 = p_max.
  const InterferenceModel model((MatrixXd(1, 1) << 1.0).finished(),
                                (VectorXd(1) << 1.0).finished(), 1.0);
  const VectorXd r_star = (VectorXd(1) << std::log(1.5)).finished();
  const auto sol = recover::recover_power(model, r_star);
  CHECK(sol.support == std::vector<int>{0});
  CHECK(sol.p_star[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.residual <= 1e-12);
  CHECK(sol.achieved[0] == doctest::Approx(std::log(1.5)).epsilon(1e-9));
}

TEST_CASE("zero targets produce zero power and empty support") {
  const InterferenceModel model((MatrixXd(1, 1) << 1.0).finished(),
                                (VectorXd(1) << 1.0).finished(), 1.0);
  const auto sol = recover::recover_power(model, VectorXd::Zero(1));
  CHECK(sol.support.empty());
  CHECK(sol.p_star[0] == 0.0);
  CHECK(sol.residual == 0.0);
  CHECK(sol.achieved[0] == 0.0);
}

TEST_CASE("partial support solves the reduced fixed point") {
  const MatrixXd m = (MatrixXd(2, 2) << 0.2, 0.05, 0.05, 0.2).finished();
  const VectorXd u = VectorXd::Ones(2);
  const InterferenceModel model(m, u, 2.0);
  VectorXd r_star(2);
  r_star << 0.4, 0.0;
  const auto sol = recover::recover_power(model, r_star);
  CHECK(sol.support == std::vector<int>{0});
  CHECK(sol.p_star[1] == 0.0);
  // One active user: p = d(m11 p + u1) with d = e^0.4 - 1.
  const double d = std::expm1(0.4);
  const double expected = d * u[0] / (1.0 - d * m(0, 0));
  CHECK(sol.p_star[0] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("full-power rates recover the full-power vector") {
  // achieved_rates(p_max * ones) lies exactly on the constraint boundary, and
  // the fixed point of the reduced map at those targets is the full-power
  // vector itself.
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto prob = instances::random_norm_problem(rng, n);
    const auto model = prob.model();
    const VectorXd target = instances::full_power_rates(model);
    const auto sol = recover::recover_power(model, target);
    CHECK(static_cast<int>(sol.support.size()) == n);
    CHECK((sol.p_star.array() - model.p_max).cwiseAbs().maxCoeff() <=
          1e-8 * model.p_max);
    CHECK(sol.p_star.lpNorm<Eigen::Infinity>() <= model.p_max * (1.0 + 1e-9));
    CHECK(sol.residual <= 1e-12);
  }
}

TEST_CASE("solver output round trip keeps the objective and the power cap") {
  std::mt19937_64 rng(67);
  const auto prob = instances::random_inverse_z_problem(rng, 3);
  const auto family = prob.family();
  const auto model = prob.model();

  auto cfg = hsd::SolverConfig::rate_defaults(3);
  cfg.max_iter = 30000;
  cfg.initial_point = 0.999 * instances::full_power_rates(model);
  cfg.schedule = hsd::StepSchedule(0.05, 0.999);
  const auto trace = hsd::solve_rate(family, cfg);
  const VectorXd r_star = trace.final_record().point;

  const auto sol = recover::recover_power(model, r_star);
  CHECK(sol.residual <= 1e-12);
  CHECK(sol.p_star.lpNorm<Eigen::Infinity>() <= model.p_max * (1.0 + 1e-9));
  CHECK(std::abs(sol.achieved.sum() - trace.final_record().objective) <= 1e-4);
}

TEST_CASE("residuals decrease monotonically") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto prob = instances::random_norm_problem(rng, n);
    const auto model = prob.model();
    const VectorXd target = 0.9 * instances::full_power_rates(model);
    const auto sol = recover::recover_power(model, target);
    REQUIRE(sol.residual_history.size() >= 2);
    for (size_t i = 1; i < sol.residual_history.size(); ++i) {
      CHECK(sol.residual_history[i] <=
            sol.residual_history[i - 1] * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("infeasible targets are rejected") {
  const InterferenceModel model((MatrixXd(1, 1) << 1.0).finished(),
                                (VectorXd(1) << 1.0).finished(), 1.0);
  CHECK_THROWS_AS(recover::recover_power(model, (VectorXd(1) << 2.0).finished()),
                  InfeasibleError);
  CHECK_THROWS_AS(recover::recover_power(model, -VectorXd::Ones(1)), DomainError);
  CHECK_THROWS_AS(recover::recover_power(model, VectorXd::Ones(2)), DimensionError);
}

TEST_CASE("solution JSON carries powers, support and the weighted sum") {
  const InterferenceModel model((MatrixXd(1, 1) << 1.0).finished(),
                                (VectorXd(1) << 1.0).finished(), 1.0);
  const auto sol =
      recover::recover_power(model, (VectorXd(1) << std::log(1.5)).finished());
  const auto j = nlohmann::json::parse(
      recover::to_json(sol, (VectorXd(1) << 2.0).finished()));
  CHECK(j.at("p_star").size() == 1);
  CHECK(j.at("support") == std::vector<int>{0});
  CHECK(j.at("sum_rate").get<double>() ==
        doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-9));
  CHECK(j.at("residual").get<double>() <= 1e-12);
  CHECK(j.at("achieved_rates").size() == 1);
}

}  // TEST_SUITE
