#include <Eigen/Core>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"
#include "sumrate/errors.hpp"
#include "sumrate/hsd.hpp"
#include "sumrate/specrad.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace sumrate;
using specrad::MaxLinearFamily;

namespace {

MaxLinearFamily scalar_family(double m) {
  return MaxLinearFamily::from_members({(MatrixXd(1, 1) << m).finished()});
}

}  // namespace

TEST_SUITE("hsd") {

TEST_CASE("step schedule values and validation") {
  const hsd::StepSchedule sched(0.4, 0.999);
  CHECK(sched.mu(1) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(sched.mu(4) == doctest::Approx(0.4 * std::pow(4.0, -0.999)).epsilon(1e-15));
  CHECK(sched.mu(1000) < sched.mu(999));

  CHECK_THROWS_AS(hsd::StepSchedule(0.0, 0.5), InvalidConfigError);
  CHECK_THROWS_AS(hsd::StepSchedule(-1.0, 0.5), InvalidConfigError);
  CHECK_THROWS_AS(hsd::StepSchedule(0.4, 0.0), InvalidConfigError);
  CHECK_THROWS_AS(hsd::StepSchedule(0.4, 1.5), InvalidConfigError);
}

TEST_CASE("box projection") {
  VectorXd v(3);
  v << -1.0, 0.5, 7.0;
  const VectorXd p = hsd::box_project(v, 2.0);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 2.0);
  CHECK_THROWS_AS(hsd::box_project(v, 0.0), DomainError);
}

TEST_CASE("projection step: scalar closed form and feasible identity") {
  const auto fam = scalar_family(2.0);

  // At r=1 the constraint value is 2(e-1)>1; one subgradient projection
  // lands at 1 - (2(e-1)-1)/(2e) = 3/(2e).
  const auto stepped = hsd::sp_step_rate(fam, (VectorXd(1) << 1.0).finished());
  CHECK(stepped.first[0] ==
        doctest::Approx(3.0 / (2.0 * std::exp(1.0))).epsilon(1e-12));

  const VectorXd inside = (VectorXd(1) << 0.1).finished();
  const auto kept = hsd::sp_step_rate(fam, inside);
  CHECK(kept.first[0] == inside[0]);
}

TEST_CASE("projection step moves infeasible points toward the boundary") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto family = instances::random_norm_problem(rng, n).family();
    VectorXd r = oracles::random_positive_vector(rng, n, 0.3, 1.0);
    while (specrad::h_rate(family, r) <= 1.0) {
      r *= 1.4;
    }
    const double before = specrad::h_rate(family, r);
    const auto stepped = hsd::sp_step_rate(family, r);
    const double after = specrad::h_rate(family, stepped.first.cwiseMax(0.0));
    CHECK(after < before);
  }
}

TEST_CASE("single-user rate solve reaches the known optimum") {
  // One member [[2]], cap 10: the boundary is 2(e^r - 1) = 1, r = ln 1.5.
  const auto fam = scalar_family(2.0);
  auto cfg = hsd::SolverConfig::rate_defaults(1);
  const auto trace = hsd::solve_rate(fam, cfg);
  const auto& last = trace.final_record();
  CHECK(last.iter == cfg.max_iter);
  CHECK(std::abs(last.objective - std::log(1.5)) <= 1e-3);
  CHECK(!trace.hit_box_bound());
}

TEST_CASE("single-user sinr solve reaches the known optimum") {
  const auto fam = scalar_family(2.0);
  auto cfg = hsd::SolverConfig::sinr_defaults(1);
  const auto trace = hsd::solve_sinr(fam, cfg);
  const auto& last = trace.final_record();
  CHECK(std::abs(last.point[0] - 0.5) <= 2e-3);
  CHECK(std::abs(last.objective - std::log(1.5)) <= 2e-3);
}

TEST_CASE("rate and sinr solvers agree with grid search on two users") {
  std::mt19937_64 rng(43);
  const auto prob = instances::random_inverse_z_problem(rng, 2);
  const auto family = prob.family();
  const VectorXd w = VectorXd::Ones(2);

  const double best = instances::grid_best_sum_rate(family, w, 1e-3);
  REQUIRE(best > 0.5);

  auto cfg = hsd::SolverConfig::rate_defaults(2);
  cfg.max_iter = 20000;
  cfg.initial_point = 0.999 * instances::full_power_rates(prob.model());
  cfg.schedule = hsd::StepSchedule(0.05, 0.999);
  const auto trace = hsd::solve_rate(family, cfg);
  CHECK(std::abs(trace.final_record().objective - best) <= 1e-3 * best);

  auto scfg = hsd::SolverConfig::sinr_defaults(2);
  scfg.max_iter = 20000;
  scfg.initial_point = 0.999 * instances::full_power_sinrs(prob.model());
  scfg.schedule = hsd::StepSchedule(0.1, 0.999);
  const auto strace = hsd::solve_sinr(family, scfg);
  CHECK(std::abs(strace.final_record().objective - best) <= 2e-3 * best);
}

TEST_CASE("iterates stay strictly positive and traces are complete") {
  std::mt19937_64 rng(47);
  const auto family = instances::random_norm_problem(rng, 3).family();
  auto cfg = hsd::SolverConfig::rate_defaults(3);
  cfg.max_iter = 400;
  const auto trace = hsd::solve_rate(family, cfg);
  REQUIRE(static_cast<int>(trace.records().size()) == 400);
  int expected_iter = 1;
  for (const auto& rec : trace.records()) {
    CHECK(rec.iter == expected_iter++);
    CHECK(rec.point.minCoeff() > 0.0);
    CHECK(rec.objective == doctest::Approx(rec.point.sum()).epsilon(1e-12));
    CHECK(rec.feasible == (rec.gamma <= 1.0 + cfg.feasibility_tol));
  }
  // gamma column is the constraint value at the recorded point
  for (int k : {0, 99, 399}) {
    const auto& rec = trace.records()[k];
    CHECK(rec.gamma ==
          doctest::Approx(specrad::h_rate(family, rec.point)).epsilon(1e-12));
  }
}

TEST_CASE("feasibility settles when warm-started with a gentle schedule") {
  std::mt19937_64 rng(53);
  const auto prob = instances::random_norm_problem(rng, 3);
  const auto family = prob.family();
  auto cfg = hsd::SolverConfig::rate_defaults(3);
  cfg.initial_point = 0.999 * instances::full_power_rates(prob.model());
  cfg.schedule = hsd::StepSchedule(0.02, 0.999);
  const auto trace = hsd::solve_rate(family, cfg);
  for (size_t k = trace.records().size() - 200; k < trace.records().size(); ++k) {
    CHECK(trace.records()[k].gamma <= 1.0 + 1e-4);
  }
}

TEST_CASE("repeated runs are bit-identical") {
  std::mt19937_64 rng(59);
  const auto family = instances::random_norm_problem(rng, 3).family();
  auto cfg = hsd::SolverConfig::rate_defaults(3);
  cfg.max_iter = 300;
  const auto a = hsd::solve_rate(family, cfg);
  const auto b = hsd::solve_rate(family, cfg);
  std::ostringstream csv_a, csv_b;
  a.write_csv(csv_a);
  b.write_csv(csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(!csv_a.str().empty());
}

TEST_CASE("csv layout: header, comment, one row per iteration") {
  const auto fam = scalar_family(2.0);
  auto cfg = hsd::SolverConfig::rate_defaults(1);
  cfg.max_iter = 5;
  const auto trace = hsd::solve_rate(fam, cfg);
  std::ostringstream out;
  trace.write_csv(out, "a=0.4 q=0.999");
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# a=0.4 q=0.999");
  REQUIRE(std::getline(in, line));
  CHECK(line == "iter,objective,gamma,feasible,active_l,r_1");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("box bound saturation is flagged and enables early exit") {
  const auto fam = scalar_family(2.0);
  auto cfg = hsd::SolverConfig::rate_defaults(1);
  cfg.box_bound = 0.3;  // 2(e^0.3 - 1) < 1, feasible face: iterates pin there
  cfg.max_iter = 10000;
  cfg.early_exit = true;
  const auto trace = hsd::solve_rate(fam, cfg);
  CHECK(trace.hit_box_bound());
  CHECK(trace.records().size() < 10000);
  CHECK(trace.final_record().point[0] <=
        0.3 + cfg.schedule.mu(trace.final_record().iter - 1) + 1e-12);
}

TEST_CASE("configuration validation") {
  const auto fam = scalar_family(2.0);
  auto cfg = hsd::SolverConfig::rate_defaults(1);

  auto bad = cfg;
  bad.initial_point = VectorXd::Ones(2);
  CHECK_THROWS_AS(hsd::solve_rate(fam, bad), DimensionError);

  bad = cfg;
  bad.initial_point = VectorXd::Zero(1);
  CHECK_THROWS_AS(hsd::solve_rate(fam, bad), InvalidConfigError);

  bad = cfg;
  bad.box_bound = 0.0;
  CHECK_THROWS_AS(hsd::solve_rate(fam, bad), InvalidConfigError);

  bad = cfg;
  bad.max_iter = 0;
  CHECK_THROWS_AS(hsd::solve_rate(fam, bad), InvalidConfigError);

  bad = cfg;
  bad.weights = VectorXd::Zero(1);
  CHECK_THROWS_AS(hsd::solve_rate(fam, bad), InvalidConfigError);

  bad = cfg;
  bad.weights = VectorXd::Ones(3);
  CHECK_THROWS_AS(hsd::solve_rate(fam, bad), DimensionError);
}

}  // TEST_SUITE
