#include "sumrate/hsd.hpp"

#include <cmath>
#include <string>

#include "sumrate/errors.hpp"

namespace sumrate::hsd {

namespace {

// Early-exit rule: objective change and constraint violation both below this
// for this many consecutive iterations.
constexpr double kEarlyExitTol = 1e-8;
constexpr int kEarlyExitRun = 50;

void validate_config(const specrad::MaxLinearFamily& family, const SolverConfig& c,
                     const char* who) {
  const std::string name(who);
  if (!(c.box_bound > 0.0)) {
    throw InvalidConfigError(name + ": box bound must be positive");
  }
  if (c.max_iter < 1) {
    throw InvalidConfigError(name + ": max_iter must be at least 1");
  }
  if (!(c.feasibility_tol >= 0.0)) {
    throw InvalidConfigError(name + ": feasibility_tol must be nonnegative");
  }
  if (c.initial_point.size() != family.dim()) {
    throw DimensionError(name + ": initial point size does not match the family");
  }
  if (!(c.initial_point.array() > 0.0).all() || !c.initial_point.allFinite()) {
    throw InvalidConfigError(name + ": initial point must be entrywise positive");
  }
  if (c.weights.size() != family.dim()) {
    throw DimensionError(name + ": weight vector size does not match the family");
  }
  if (!(c.weights.array() > 0.0).all() || !c.weights.allFinite()) {
    throw InvalidConfigError(name + ": weights must be entrywise positive");
  }
}

}  // namespace

StepSchedule::StepSchedule(double a_in, double q_in) : a(a_in), q(q_in) {
  if (!(a > 0.0)) {
    throw InvalidConfigError("StepSchedule: a must be positive");
  }
  if (!(q > 0.0) || q > 1.0) {
    throw InvalidConfigError("StepSchedule: q must lie in (0, 1]");
  }
}

double StepSchedule::mu(int k) const {
  return a * std::pow(static_cast<double>(k), -q);
}

SolverConfig SolverConfig::rate_defaults(int n) {
  SolverConfig c;
  c.box_bound = 50.0;
  c.max_iter = 2000;
  c.schedule = StepSchedule(0.4, 0.999);
  c.initial_point = Eigen::VectorXd::Constant(n, 0.5);
  c.weights = Eigen::VectorXd::Ones(n);
  return c;
}

SolverConfig SolverConfig::sinr_defaults(int n) {
  SolverConfig c;
  c.box_bound = 1e6;
  c.max_iter = 2000;
  c.schedule = StepSchedule(1.6, 0.999);
  c.initial_point = Eigen::VectorXd::Constant(n, 0.5);
  c.weights = Eigen::VectorXd::Ones(n);
  return c;
}

Eigen::VectorXd box_project(const Eigen::VectorXd& v, double b) {
  if (!(b > 0.0)) {
    throw DomainError("box_project: bound must be positive");
  }
  return v.cwiseMax(0.0).cwiseMin(b);
}

std::pair<Eigen::VectorXd, specrad::SubgradResult> sp_step_rate(
    const specrad::MaxLinearFamily& family, const Eigen::VectorXd& r) {
  specrad::SubgradResult sub = specrad::subgrad_rate(family, r);
  if (sub.value > 1.0) {
    const Eigen::VectorXd stepped =
        r - (sub.value - 1.0) / sub.gradient.squaredNorm() * sub.gradient;
    return {stepped, std::move(sub)};
  }
  return {r, std::move(sub)};
}

Eigen::VectorXd grad_phi(const Eigen::VectorXd& s, const Eigen::VectorXd& w) {
  if (s.size() != w.size()) {
    throw DimensionError("grad_phi: size mismatch");
  }
  if (!(s.array() >= 0.0).all()) {
    throw DomainError("grad_phi: point must be entrywise nonnegative");
  }
  return (-w.array() / (1.0 + s.array())).matrix();
}

IterTrace solve_rate(const specrad::MaxLinearFamily& family, const SolverConfig& config) {
  validate_config(family, config, "solve_rate");
  IterTrace trace("r", family.dim());
  Eigen::VectorXd r = config.initial_point;
  double prev_obj = 0.0;
  int stall = 0;
  for (int k = 1; k <= config.max_iter; ++k) {
    // gamma_k is evaluated once here and reused for the trace, the feasible
    // flag, and the projection branch below.
    specrad::SubgradResult sub = specrad::subgrad_rate(family, r);
    const double obj = config.weights.dot(r);
    const double viol = std::max(0.0, sub.value - 1.0);
    trace.add({k, obj, sub.value, sub.value <= 1.0 + config.feasibility_tol,
               sub.active_index, r});
    if (config.early_exit) {
      if (k > 1 && std::abs(obj - prev_obj) < kEarlyExitTol && viol < kEarlyExitTol) {
        if (++stall >= kEarlyExitRun) {
          break;
        }
      } else {
        stall = 0;
      }
    }
    prev_obj = obj;
    Eigen::VectorXd hat = r;
    if (sub.value > 1.0) {
      hat -= (sub.value - 1.0) / sub.gradient.squaredNorm() * sub.gradient;
    }
    if ((hat.array() >= config.box_bound).any()) {
      trace.set_hit_box_bound();
    }
    r = box_project(hat, config.box_bound) + config.schedule.mu(k) * config.weights;
  }
  return trace;
}

IterTrace solve_sinr(const specrad::MaxLinearFamily& family, const SolverConfig& config) {
  validate_config(family, config, "solve_sinr");
  IterTrace trace("s", family.dim());
  Eigen::VectorXd s = config.initial_point;
  double prev_obj = 0.0;
  int stall = 0;
  for (int k = 1; k <= config.max_iter; ++k) {
    specrad::SubgradResult sub = specrad::subgrad_sinr(family, s);
    const double obj = (config.weights.array() * s.array().log1p()).sum();
    const double viol = std::max(0.0, sub.value - 1.0);
    trace.add({k, obj, sub.value, sub.value <= 1.0 + config.feasibility_tol,
               sub.active_index, s});
    if (config.early_exit) {
      if (k > 1 && std::abs(obj - prev_obj) < kEarlyExitTol && viol < kEarlyExitTol) {
        if (++stall >= kEarlyExitRun) {
          break;
        }
      } else {
        stall = 0;
      }
    }
    prev_obj = obj;
    Eigen::VectorXd hat = s;
    if (sub.value > 1.0) {
      hat -= (sub.value - 1.0) / sub.gradient.squaredNorm() * sub.gradient;
    }
    if ((hat.array() >= config.box_bound).any()) {
      trace.set_hit_box_bound();
    }
    const Eigen::VectorXd tilde = box_project(hat, config.box_bound);
    s = tilde - config.schedule.mu(k) * grad_phi(tilde, config.weights);
  }
  return trace;
}

}  // namespace sumrate::hsd
