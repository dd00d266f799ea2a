#pragma once

#include <Eigen/Core>
#include <vector>

namespace sumrate::specrad {

// Coordinatewise r -> exp(r) - 1, the change of variables between rates and
// SINR targets.
Eigen::VectorXd exp_map(const Eigen::VectorXd& r);

// Family of member matrices M_l behind the gauge
//   g(x) = max_l rho(diag(x) M_l).
// When built from a coupling matrix M, a positive noise vector u and norm
// generators a_l (the constraint ||p|| = max_l a_l^T p), the members are
// M_l = M + u a_l^T and the family also remembers its generators, which the
// fixed-point oracle needs.
class MaxLinearFamily {
 public:
  static MaxLinearFamily from_members(std::vector<Eigen::MatrixXd> members);
  static MaxLinearFamily from_norm(const Eigen::MatrixXd& coupling,
                                   const Eigen::VectorXd& noise,
                                   const std::vector<Eigen::VectorXd>& generators);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(members_.size()); }
  const Eigen::MatrixXd& member(int l) const { return members_[l]; }
  const std::vector<Eigen::MatrixXd>& members() const { return members_; }

  bool has_generators() const { return has_generators_; }
  const Eigen::MatrixXd& coupling() const;
  const Eigen::VectorXd& noise() const;
  const std::vector<Eigen::VectorXd>& generators() const;

 private:
  MaxLinearFamily() = default;
  int dim_ = 0;
  std::vector<Eigen::MatrixXd> members_;
  bool has_generators_ = false;
  Eigen::MatrixXd coupling_;
  Eigen::VectorXd noise_;
  std::vector<Eigen::VectorXd> generators_;
};

// Gauge value g(x) for x >= 0. Zero coordinates are handled by restricting
// each member to the support of x (the discarded rows are zero, so the
// spectral radius lives on the principal submatrix); g(0) = 0.
double rho_g(const MaxLinearFamily& family, const Eigen::VectorXd& x,
             double tol = 1e-12, int max_iter = 100000);

// rho(diag(x) M_l) for a single member, with the same zero-coordinate
// handling as rho_g.
double member_radius(const MaxLinearFamily& family, int l, const Eigen::VectorXd& x,
                     double tol = 1e-12, int max_iter = 100000);

// Rate-domain constraint function: clamp negatives to zero, apply exp_map,
// then the gauge. Feasible rate tuples satisfy h_rate(r) <= 1.
double h_rate(const MaxLinearFamily& family, const Eigen::VectorXd& r,
              double tol = 1e-12, int max_iter = 100000);

// Value, active member, and a subgradient of the constraint function at a
// strictly positive point. `active_index` is the smallest maximizing member
// (0-based).
struct SubgradResult {
  double value = 0.0;
  int active_index = 0;
  Eigen::VectorXd gradient;
};

// Subgradient of h_rate at strictly positive rates:
//   diag(exp(r)) diag(eta) M_l* xi / (eta^T xi),
// with (xi, eta) the Perron pair of diag(exp_map(r)) M_l*.
SubgradResult subgrad_rate(const MaxLinearFamily& family, const Eigen::VectorXd& r,
                           double tol = 1e-12, int max_iter = 100000);

// Subgradient of the gauge itself at strictly positive SINR targets:
//   diag(eta) M_l* xi / (eta^T xi).
SubgradResult subgrad_sinr(const MaxLinearFamily& family, const Eigen::VectorXd& s,
                           double tol = 1e-12, int max_iter = 100000);

// Independent check of rho_g: normalized fixed-point iteration
//   p <- T(p) / ||T(p)||_inf,  T(p) = diag(x)(M p + u max_l a_l^T p),
// starting from all-ones; returns the limit of ||T(p)||_inf. Defined for
// families with generators (any member count) and for raw single-member
// families, where T is linear. Test scaffolding, not a production path.
double nonlinear_radius_oracle(const MaxLinearFamily& family, const Eigen::VectorXd& x,
                               double tol = 1e-10, int max_iter = 100000);

}  // namespace sumrate::specrad
