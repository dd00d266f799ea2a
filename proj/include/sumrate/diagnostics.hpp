#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sumrate/scenario.hpp"
#include "sumrate/specrad.hpp"

namespace sumrate::diagnostics {

// Result of a sampled midpoint-convexity scan. A check compares a member
// value at alpha x1 + (1-alpha) x2 against the chord value plus the slack;
// `worst_gap` is the largest midpoint-minus-chord difference seen (negative
// when every sampled segment was convex with margin).
struct ConvexityReport {
  long long violations = 0;
  long long total_checks = 0;
  double worst_gap = 0.0;
  // echoed parameters
  std::string domain;  // "rate" or "sinr"
  int n_pairs = 0;
  double box_hi = 0.0;
  int n_alpha = 0;
  double slack = 0.0;
  std::uint64_t seed = 0;
};

std::string to_json(const ConvexityReport& report);

// Sampled necessary condition for convexity of r -> rho(diag(exp(r)-1) M_l),
// checked member by member on random pairs from [0, box_hi]^N with n_alpha
// interpolation points spread over [0.01, 0.99]. The slack absorbs the
// finite precision of the radius evaluations.
ConvexityReport check_rate_convexity_samples(const specrad::MaxLinearFamily& family,
                                             int n_pairs = 10000, double box_hi = 5.0,
                                             int n_alpha = 99, std::uint64_t seed = 1,
                                             double slack = 1e-12);

// Same scan for the SINR-domain member functions x -> rho(diag(x) M_l),
// which are concave-domain-free and should never violate convexity beyond
// numerical noise (default slack 1e-13).
ConvexityReport check_sinr_convexity_samples(const specrad::MaxLinearFamily& family,
                                             int n_pairs = 10000, double box_hi = 5.0,
                                             int n_alpha = 99, std::uint64_t seed = 1,
                                             double slack = 1e-13);

// True when every member matrix of the family has an inverse with
// nonpositive off-diagonal entries (a sufficient condition for rate-domain
// convexity of all members).
bool family_inverse_z(const specrad::MaxLinearFamily& family);

// Fraction of problems whose constraint families pass family_inverse_z.
double inverse_z_fraction(const std::vector<scenario::UatFProblem>& problems);

}  // namespace sumrate::diagnostics
