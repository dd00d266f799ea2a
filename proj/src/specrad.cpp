#include "sumrate/specrad.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sumrate/errors.hpp"
#include "sumrate/perron.hpp"

namespace sumrate::specrad {

namespace {

void require_dim(const Eigen::VectorXd& v, int n, const char* who) {
  if (v.size() != n) {
    throw DimensionError(std::string(who) + ": vector size does not match family dimension");
  }
}

std::vector<int> support(const Eigen::VectorXd& x) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      idx.push_back(static_cast<int>(i));
    }
  }
  return idx;
}

// rho(diag(x) M) with the zero coordinates of x removed first. On full
// support this is just the usual product; on partial support the removed
// rows of diag(x) M are identically zero, so the spectrum is that of the
// principal submatrix on supp(x) plus zeros.
double scaled_radius(const Eigen::MatrixXd& m, const Eigen::VectorXd& x,
                     const std::vector<int>& supp, double tol, int max_iter) {
  const int k = static_cast<int>(supp.size());
  if (k == static_cast<int>(x.size())) {
    return perron::spectral_radius(x.asDiagonal() * m, tol, max_iter);
  }
  Eigen::MatrixXd sub(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      sub(i, j) = x[supp[i]] * m(supp[i], supp[j]);
    }
  }
  return perron::spectral_radius(sub, tol, max_iter);
}

// Max over members of rho(diag(x) M_l), remembering the smallest argmax.
std::pair<double, int> max_member_radius(const MaxLinearFamily& family,
                                         const Eigen::VectorXd& x,
                                         const std::vector<int>& supp,
                                         double tol, int max_iter) {
  double best = -std::numeric_limits<double>::infinity();
  int best_l = 0;
  for (int l = 0; l < family.count(); ++l) {
    const double rho = scaled_radius(family.member(l), x, supp, tol, max_iter);
    if (rho > best) {
      best = rho;
      best_l = l;
    }
  }
  return {best, best_l};
}

}  // namespace

Eigen::VectorXd exp_map(const Eigen::VectorXd& r) {
  return r.array().unaryExpr([](double v) { return std::expm1(v); }).matrix();
}

MaxLinearFamily MaxLinearFamily::from_members(std::vector<Eigen::MatrixXd> members) {
  if (members.empty()) {
    throw InvalidConfigError("MaxLinearFamily: at least one member is required");
  }
  const Eigen::Index n = members.front().rows();
  for (const auto& m : members) {
    if (m.rows() != n || m.cols() != n) {
      throw DimensionError("MaxLinearFamily: members must be square with a common size");
    }
    if (!(m.array() > 0.0).all() || !m.allFinite()) {
      throw DomainError("MaxLinearFamily: members must be entrywise positive and finite");
    }
  }
  MaxLinearFamily fam;
  fam.dim_ = static_cast<int>(n);
  fam.members_ = std::move(members);
  return fam;
}

MaxLinearFamily MaxLinearFamily::from_norm(const Eigen::MatrixXd& coupling,
                                           const Eigen::VectorXd& noise,
                                           const std::vector<Eigen::VectorXd>& generators) {
  const Eigen::Index n = coupling.rows();
  if (coupling.cols() != n || n == 0) {
    throw DimensionError("MaxLinearFamily: coupling matrix must be square and nonempty");
  }
  if (!(coupling.array() > 0.0).all() || !coupling.allFinite()) {
    throw DomainError("MaxLinearFamily: coupling matrix must be entrywise positive");
  }
  if (noise.size() != n) {
    throw DimensionError("MaxLinearFamily: noise vector size mismatch");
  }
  if (!(noise.array() > 0.0).all() || !noise.allFinite()) {
    throw DomainError("MaxLinearFamily: noise vector must be entrywise positive");
  }
  if (generators.empty()) {
    throw InvalidConfigError("MaxLinearFamily: at least one norm generator is required");
  }
  std::vector<Eigen::MatrixXd> members;
  members.reserve(generators.size());
  for (const auto& a : generators) {
    if (a.size() != n) {
      throw DimensionError("MaxLinearFamily: norm generator size mismatch");
    }
    if (!(a.array() >= 0.0).all() || !(a.array() > 0.0).any() || !a.allFinite()) {
      throw DomainError("MaxLinearFamily: norm generators must be nonnegative and nonzero");
    }
    members.push_back(coupling + noise * a.transpose());
  }
  MaxLinearFamily fam;
  fam.dim_ = static_cast<int>(n);
  fam.members_ = std::move(members);
  fam.has_generators_ = true;
  fam.coupling_ = coupling;
  fam.noise_ = noise;
  fam.generators_ = generators;
  return fam;
}

const Eigen::MatrixXd& MaxLinearFamily::coupling() const {
  if (!has_generators_) {
    throw InvalidConfigError("MaxLinearFamily: family was not built from norm generators");
  }
  return coupling_;
}

const Eigen::VectorXd& MaxLinearFamily::noise() const {
  if (!has_generators_) {
    throw InvalidConfigError("MaxLinearFamily: family was not built from norm generators");
  }
  return noise_;
}

const std::vector<Eigen::VectorXd>& MaxLinearFamily::generators() const {
  if (!has_generators_) {
    throw InvalidConfigError("MaxLinearFamily: family was not built from norm generators");
  }
  return generators_;
}

double rho_g(const MaxLinearFamily& family, const Eigen::VectorXd& x,
             double tol, int max_iter) {
  require_dim(x, family.dim(), "rho_g");
  if (!(x.array() >= 0.0).all() || !x.allFinite()) {
    throw DomainError("rho_g: point must be entrywise nonnegative and finite");
  }
  const std::vector<int> supp = support(x);
  if (supp.empty()) {
    return 0.0;
  }
  return max_member_radius(family, x, supp, tol, max_iter).first;
}

double member_radius(const MaxLinearFamily& family, int l, const Eigen::VectorXd& x,
                     double tol, int max_iter) {
  require_dim(x, family.dim(), "member_radius");
  if (l < 0 || l >= family.count()) {
    throw DimensionError("member_radius: member index out of range");
  }
  if (!(x.array() >= 0.0).all() || !x.allFinite()) {
    throw DomainError("member_radius: point must be entrywise nonnegative and finite");
  }
  const std::vector<int> supp = support(x);
  if (supp.empty()) {
    return 0.0;
  }
  return scaled_radius(family.member(l), x, supp, tol, max_iter);
}

double h_rate(const MaxLinearFamily& family, const Eigen::VectorXd& r,
              double tol, int max_iter) {
  require_dim(r, family.dim(), "h_rate");
  if (!r.allFinite()) {
    throw DomainError("h_rate: rates must be finite");
  }
  return rho_g(family, exp_map(r.cwiseMax(0.0)), tol, max_iter);
}

SubgradResult subgrad_rate(const MaxLinearFamily& family, const Eigen::VectorXd& r,
                           double tol, int max_iter) {
  require_dim(r, family.dim(), "subgrad_rate");
  if (!(r.array() > 0.0).all() || !r.allFinite()) {
    throw DomainError("subgrad_rate: rates must be entrywise positive and finite");
  }
  const Eigen::VectorXd x = exp_map(r);
  const std::vector<int> supp = support(x);
  SubgradResult out;
  const auto [value, l_star] = max_member_radius(family, x, supp, tol, max_iter);
  out.value = value;
  out.active_index = l_star;
  const auto pair =
      perron::perron_pair(x.asDiagonal() * family.member(l_star), tol, max_iter);
  const Eigen::VectorXd inner =
      pair.left.asDiagonal() * (family.member(l_star) * pair.right) /
      pair.left.dot(pair.right);
  out.gradient = r.array().exp().matrix().asDiagonal() * inner;
  return out;
}

SubgradResult subgrad_sinr(const MaxLinearFamily& family, const Eigen::VectorXd& s,
                           double tol, int max_iter) {
  require_dim(s, family.dim(), "subgrad_sinr");
  if (!(s.array() > 0.0).all() || !s.allFinite()) {
    throw DomainError("subgrad_sinr: point must be entrywise positive and finite");
  }
  const std::vector<int> supp = support(s);
  SubgradResult out;
  const auto [value, l_star] = max_member_radius(family, s, supp, tol, max_iter);
  out.value = value;
  out.active_index = l_star;
  const auto pair =
      perron::perron_pair(s.asDiagonal() * family.member(l_star), tol, max_iter);
  out.gradient = pair.left.asDiagonal() * (family.member(l_star) * pair.right) /
                 pair.left.dot(pair.right);
  return out;
}

double nonlinear_radius_oracle(const MaxLinearFamily& family, const Eigen::VectorXd& x,
                               double tol, int max_iter) {
  require_dim(x, family.dim(), "nonlinear_radius_oracle");
  if (!(x.array() > 0.0).all() || !x.allFinite()) {
    throw DomainError("nonlinear_radius_oracle: point must be entrywise positive");
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw DomainError("nonlinear_radius_oracle: bad tol/max_iter");
  }
  if (!family.has_generators() && family.count() > 1) {
    throw InvalidConfigError(
        "nonlinear_radius_oracle: member matrices alone do not determine the "
        "fixed-point map for multi-member families; build the family from norm "
        "generators");
  }
  const Eigen::Index n = family.dim();
  const auto apply = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    if (family.has_generators()) {
      double norm = -std::numeric_limits<double>::infinity();
      for (const auto& a : family.generators()) {
        norm = std::max(norm, a.dot(p));
      }
      return x.asDiagonal() * (family.coupling() * p + family.noise() * norm);
    }
    return x.asDiagonal() * (family.member(0) * p);
  };
  // Same Collatz-style enclosure as the linear power iteration; the map is
  // order preserving and positively homogeneous, so the ratio bounds apply.
  Eigen::VectorXd p = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd tp = apply(p);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ratio = tp[i] / p[i];
      hi = std::max(hi, ratio);
      lo = std::min(lo, ratio);
    }
    if (hi - lo <= tol * hi) {
      return 0.5 * (hi + lo);
    }
    p = tp / tp.lpNorm<Eigen::Infinity>();
  }
  throw NonConvergenceError("nonlinear_radius_oracle: fixed-point iteration did not converge");
}

}  // namespace sumrate::specrad
