#pragma once

#include <Eigen/Core>

#include "sumrate/recover.hpp"
#include "sumrate/trace.hpp"

namespace sumrate::wmmse {

struct Options {
  int max_iter = 10000;       // iteration cap
  double power_tol = 1e-10;   // convergence: max absolute power change
  double feasibility_tol = 1e-4;
};

// Weighted-MMSE block-coordinate baseline for the same weighted sum-rate
// objective, specialized to scalar effective channels: each user's link is
// modeled as y_n = sqrt(p_n) x_n + z_n with noise power f_n(p), so the MMSE
// weight recovers 1 + SINR_n and the power step minimizes the weighted MSE
// surrogate, which is separable across users under the per-user cap.
// `p_init` must lie in [0, p_max]^N; a user started at exactly zero power
// stays at zero (the surrogate is stationary there), which is why different
// initializations can reach different objectives.
//
// The trace records the initial point and every update; gamma is the scaled
// power norm max_n p_n / p_max and active_l its argmax coordinate.
IterTrace solve(const recover::InterferenceModel& model, const Eigen::VectorXd& weights,
                const Eigen::VectorXd& p_init, const Options& opts = {});

}  // namespace sumrate::wmmse
