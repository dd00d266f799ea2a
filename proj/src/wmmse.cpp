#include "sumrate/wmmse.hpp"

#include <cmath>

#include "sumrate/errors.hpp"

namespace sumrate::wmmse {

namespace {

IterRecord make_record(int k, const recover::InterferenceModel& model,
                       const Eigen::VectorXd& w, const Eigen::VectorXd& p,
                       double feasibility_tol) {
  IterRecord rec;
  rec.iter = k;
  rec.objective = w.dot(recover::achieved_rates(model, p));
  int active = 0;
  p.maxCoeff(&active);
  rec.gamma = p[active] / model.p_max;
  rec.feasible = rec.gamma <= 1.0 + feasibility_tol;
  rec.active_index = active;
  rec.point = p;
  return rec;
}

}  // namespace

IterTrace solve(const recover::InterferenceModel& model, const Eigen::VectorXd& weights,
                const Eigen::VectorXd& p_init, const Options& opts) {
  const int n = model.dim();
  if (weights.size() != n || p_init.size() != n) {
    throw DimensionError("wmmse::solve: weights/initial point size mismatch");
  }
  if (!(weights.array() > 0.0).all() || !weights.allFinite()) {
    throw InvalidConfigError("wmmse::solve: weights must be entrywise positive");
  }
  if (!(p_init.array() >= 0.0).all() || !(p_init.array() <= model.p_max).all() ||
      !p_init.allFinite()) {
    throw InvalidConfigError("wmmse::solve: initial powers must lie in [0, p_max]");
  }
  if (opts.max_iter < 1 || !(opts.power_tol >= 0.0)) {
    throw InvalidConfigError("wmmse::solve: bad iteration parameters");
  }

  const double q_cap = std::sqrt(model.p_max);
  IterTrace trace("p", n);
  Eigen::VectorXd p = p_init;
  trace.add(make_record(1, model, weights, p, opts.feasibility_tol));

  Eigen::VectorXd q = p.array().sqrt();
  for (int k = 2; k <= opts.max_iter; ++k) {
    const Eigen::VectorXd f = model.coupling * p + model.noise;
    // MMSE receive scalars and weights: c_n = q_n/(q_n^2+f_n) and
    // omega_n = 1 + SINR_n; both stay finite since f > 0.
    const Eigen::ArrayXd c = q.array() / (q.array().square() + f.array());
    const Eigen::ArrayXd omega = (q.array().square() + f.array()) / f.array();
    const Eigen::ArrayXd row_weight = weights.array() * omega * c.square();
    // Minimizing the weighted MSE surrogate over q decouples per coordinate:
    //   q_l = w_l omega_l c_l / (w_l omega_l c_l^2 + sum_n w_n omega_n c_n^2 M_nl)
    // clamped to the power cap.
    const Eigen::ArrayXd denom =
        row_weight + (model.coupling.transpose() * row_weight.matrix()).array();
    Eigen::VectorXd q_new(n);
    for (int l = 0; l < n; ++l) {
      const double num = weights[l] * omega[l] * c[l];
      q_new[l] = denom[l] > 0.0 ? std::min(num / denom[l], q_cap) : 0.0;
    }
    const Eigen::VectorXd p_new = q_new.array().square();
    const double delta = (p_new - p).lpNorm<Eigen::Infinity>();
    p = p_new;
    q = q_new;
    trace.add(make_record(k, model, weights, p, opts.feasibility_tol));
    if (delta <= opts.power_tol) {
      break;
    }
  }
  return trace;
}

}  // namespace sumrate::wmmse
