#pragma once

#include <Eigen/Core>
#include <utility>

#include "sumrate/specrad.hpp"
#include "sumrate/trace.hpp"

namespace sumrate::hsd {

// Diminishing step sizes mu_k = a * k^(-q), a > 0, 0 < q <= 1.
struct StepSchedule {
  StepSchedule(double a, double q);
  double mu(int k) const;
  double a;
  double q;
};

// Configuration shared by the two solvers. `initial_point` must be strictly
// positive and match the family dimension. `feasibility_tol` only feeds the
// per-iteration feasible flag in the trace. When `early_exit` is set, the
// loop stops once objective change and constraint violation both stay below
// 1e-8 for 50 consecutive iterations.
struct SolverConfig {
  double box_bound = 0.0;
  int max_iter = 0;
  double feasibility_tol = 1e-4;
  Eigen::VectorXd initial_point;
  StepSchedule schedule{1.0, 1.0};
  Eigen::VectorXd weights;
  bool early_exit = false;

  // Defaults matching the reference cell-less setup: rate domain
  // (a=0.4, q=0.999, start 0.5*ones, box 50) and SINR domain
  // (a=1.6, q=0.999, start 0.5*ones, box 1e6), 2000 iterations, unit weights.
  static SolverConfig rate_defaults(int n);
  static SolverConfig sinr_defaults(int n);
};

// Coordinatewise projection onto [0, b]^N.
Eigen::VectorXd box_project(const Eigen::VectorXd& v, double b);

// One subgradient projection step toward the sublevel set {h_rate <= 1}:
// identity when h_rate(r) <= 1, otherwise
//   r - (h(r) - 1) g / ||g||_2^2.
// Also returns the evaluated value/subgradient so callers can reuse them.
std::pair<Eigen::VectorXd, specrad::SubgradResult> sp_step_rate(
    const specrad::MaxLinearFamily& family, const Eigen::VectorXd& r);

// Gradient of the weighted SINR-domain objective Phi(s) = -sum w_n log(1+s_n)
// at s >= 0, i.e. the vector (-w_n / (1 + s_n)).
Eigen::VectorXd grad_phi(const Eigen::VectorXd& s, const Eigen::VectorXd& w);

// Maximize w^T r over {r >= 0 : h_rate(r) <= 1} by alternating a subgradient
// projection toward the constraint set, a box projection onto [0,b]^N, and a
// gradient ascent step r + mu_k w. The trace holds one record per executed
// iteration, evaluated at the iterate the iteration started from.
IterTrace solve_rate(const specrad::MaxLinearFamily& family, const SolverConfig& config);

// Same loop in the SINR domain: maximize sum w_n log(1+s_n) subject to
// rho_g(s) <= 1; ascent step s + mu_k * (w_n / (1+s_n)).
IterTrace solve_sinr(const specrad::MaxLinearFamily& family, const SolverConfig& config);

}  // namespace sumrate::hsd
