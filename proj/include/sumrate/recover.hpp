#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sumrate::recover {

// Linear interference model: user n sees interference-plus-noise
// f_n(p) = coupling.row(n) * p + noise[n], under a per-user power cap p_max.
struct InterferenceModel {
  InterferenceModel(Eigen::MatrixXd coupling, Eigen::VectorXd noise, double p_max);
  Eigen::MatrixXd coupling;
  Eigen::VectorXd noise;
  double p_max;
  int dim() const { return static_cast<int>(noise.size()); }
};

// Rates log(1 + p_n / f_n(p)) achieved by the power vector p >= 0.
Eigen::VectorXd achieved_rates(const InterferenceModel& model, const Eigen::VectorXd& p);

struct RecoveredSolution {
  Eigen::VectorXd p_star;
  std::vector<int> support;  // 0-based indices with r*_n above the support cutoff
  double residual = 0.0;     // fixed-point residual ||T(q) - q||_inf at exit
  Eigen::VectorXd achieved;  // achieved_rates at p_star
  std::vector<double> residual_history;  // one entry per fixed-point sweep
};

// JSON object {p_star, support, residual, achieved_rates, sum_rate} with
// sum_rate = weights^T achieved.
std::string to_json(const RecoveredSolution& sol, const Eigen::VectorXd& weights);

// Recover the minimal power vector meeting the rate targets r_star: on the
// support I = {n : r*_n > support_eps}, iterate q <- D* F_I(q) with
// D* = diag(exp(r*_n) - 1) from all-ones until the residual drops below
// fp_tol; off-support powers are zero. Requires the targets to be feasible
// within feas_tol (constraint value <= 1 + feas_tol); targets that exceed the
// boundary by at most feas_tol are first scaled back onto it (the gauge is
// positively homogeneous, so dividing the SINR targets by the constraint
// value lands exactly on the boundary).
RecoveredSolution recover_power(const InterferenceModel& model,
                                const Eigen::VectorXd& r_star,
                                double fp_tol = 1e-12, int max_iter = 100000,
                                double feas_tol = 1e-3, double support_eps = 1e-9);

}  // namespace sumrate::recover
