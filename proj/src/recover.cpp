#include "sumrate/recover.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "sumrate/errors.hpp"
#include "sumrate/specrad.hpp"

namespace sumrate::recover {

namespace {

specrad::MaxLinearFamily family_of(const InterferenceModel& model) {
  std::vector<Eigen::VectorXd> gens;
  gens.reserve(model.dim());
  for (int l = 0; l < model.dim(); ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(model.dim());
    e[l] = 1.0 / model.p_max;
    gens.push_back(std::move(e));
  }
  return specrad::MaxLinearFamily::from_norm(model.coupling, model.noise, gens);
}

}  // namespace

InterferenceModel::InterferenceModel(Eigen::MatrixXd coupling_in, Eigen::VectorXd noise_in,
                                     double p_max_in)
    : coupling(std::move(coupling_in)), noise(std::move(noise_in)), p_max(p_max_in) {
  if (coupling.rows() != coupling.cols() || coupling.rows() != noise.size() ||
      noise.size() == 0) {
    throw DimensionError("InterferenceModel: coupling/noise sizes are inconsistent");
  }
  if (!(coupling.array() > 0.0).all() || !(noise.array() > 0.0).all() ||
      !coupling.allFinite() || !noise.allFinite()) {
    throw DomainError("InterferenceModel: coupling and noise must be entrywise positive");
  }
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw DomainError("InterferenceModel: p_max must be positive and finite");
  }
}

Eigen::VectorXd achieved_rates(const InterferenceModel& model, const Eigen::VectorXd& p) {
  if (p.size() != model.dim()) {
    throw DimensionError("achieved_rates: power vector size mismatch");
  }
  if (!(p.array() >= 0.0).all() || !p.allFinite()) {
    throw DomainError("achieved_rates: powers must be entrywise nonnegative");
  }
  const Eigen::VectorXd f = model.coupling * p + model.noise;
  return (p.array() / f.array()).log1p().matrix();
}

std::string to_json(const RecoveredSolution& sol, const Eigen::VectorXd& weights) {
  if (weights.size() != sol.p_star.size()) {
    throw DimensionError("to_json: weights size mismatch");
  }
  nlohmann::json j;
  j["p_star"] = std::vector<double>(sol.p_star.begin(), sol.p_star.end());
  j["support"] = sol.support;
  j["residual"] = sol.residual;
  j["achieved_rates"] = std::vector<double>(sol.achieved.begin(), sol.achieved.end());
  j["sum_rate"] = weights.dot(sol.achieved);
  return j.dump(2);
}

RecoveredSolution recover_power(const InterferenceModel& model,
                                const Eigen::VectorXd& r_star, double fp_tol,
                                int max_iter, double feas_tol, double support_eps) {
  const int n = model.dim();
  if (r_star.size() != n) {
    throw DimensionError("recover_power: rate vector size mismatch");
  }
  if (!(r_star.array() >= 0.0).all() || !r_star.allFinite()) {
    throw DomainError("recover_power: rate targets must be entrywise nonnegative");
  }
  if (!(fp_tol > 0.0) || max_iter < 1 || !(feas_tol >= 0.0) || !(support_eps >= 0.0)) {
    throw DomainError("recover_power: bad tolerance/iteration parameters");
  }

  const specrad::MaxLinearFamily family = family_of(model);
  const double gamma = specrad::h_rate(family, r_star);
  if (gamma > 1.0 + feas_tol) {
    std::ostringstream msg;
    msg << "recover_power: targets infeasible (constraint value " << gamma << ")";
    throw InfeasibleError(msg.str());
  }

  RecoveredSolution sol;
  sol.p_star = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (r_star[i] > support_eps) {
      sol.support.push_back(i);
    }
  }
  const int k = static_cast<int>(sol.support.size());
  if (k == 0) {
    sol.residual = 0.0;
    sol.achieved = achieved_rates(model, sol.p_star);
    return sol;
  }

  // SINR targets on the support; a boundary overshoot within feas_tol is
  // scaled away so the fixed point sits exactly on the power boundary
  // instead of inheriting the overshoot amplified through the inverse map.
  Eigen::VectorXd d(k);
  const double scale = gamma > 1.0 ? 1.0 / gamma : 1.0;
  for (int i = 0; i < k; ++i) {
    d[i] = std::expm1(r_star[sol.support[i]]) * scale;
  }
  Eigen::MatrixXd m_sub(k, k);
  Eigen::VectorXd u_sub(k);
  for (int i = 0; i < k; ++i) {
    u_sub[i] = model.noise[sol.support[i]];
    for (int j = 0; j < k; ++j) {
      m_sub(i, j) = model.coupling(sol.support[i], sol.support[j]);
    }
  }

  Eigen::VectorXd q = Eigen::VectorXd::Ones(k);
  double residual = 0.0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd tq = d.asDiagonal() * (m_sub * q + u_sub);
    residual = (tq - q).lpNorm<Eigen::Infinity>();
    sol.residual_history.push_back(residual);
    q = tq;
    if (residual <= fp_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergenceError("recover_power: fixed-point iteration did not converge");
  }

  for (int i = 0; i < k; ++i) {
    sol.p_star[sol.support[i]] = q[i];
  }
  sol.residual = residual;
  sol.achieved = achieved_rates(model, sol.p_star);
  return sol;
}

}  // namespace sumrate::recover
