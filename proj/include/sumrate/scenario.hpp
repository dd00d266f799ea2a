#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sumrate/specrad.hpp"

namespace sumrate::scenario {

// Access points and single-antenna users dropped uniformly on a square,
// distance-based path gains, and per-user association with the strongest
// access points.
struct LayoutParams {
  int n_users = 3;
  int n_aps = 4;
  int antennas_per_ap = 2;
  double side_m = 100.0;
  int serve_count = 2;
};

struct NetworkLayout {
  LayoutParams params;
  std::uint64_t seed = 0;
  Eigen::MatrixX2d ap_positions;    // n_aps x 2
  Eigen::MatrixX2d user_positions;  // n_users x 2
  // Per user: serving AP indices, strongest path gain first.
  std::vector<std::vector<int>> association;
};

// Path gain (d/d0)^(-3.67) with d0 = 1 m; distances are clamped below at 1 m.
double path_gain(double distance_m);

NetworkLayout generate_layout(const LayoutParams& params, std::uint64_t seed);

// Per-user i.i.d. Rayleigh small-scale fading samples around the layout's
// path gains: entry variance equals the gain of the owning access point.
struct ChannelSampleSet {
  int n_samples = 0;
  int coords = 0;  // n_aps * antennas_per_ap
  // samples[n] is n_samples x coords, one row per channel draw of user n.
  std::vector<Eigen::MatrixXcd> samples;
};

ChannelSampleSet sample_channels(const NetworkLayout& layout, int n_samples,
                                 std::uint64_t seed);

// Interference coupling for the use-and-then-forget SINR bound under
// conjugate beamforming on the serving coordinates:
//   row n of `coupling` is c_n / |E[h_n^H v_n]|^2 with
//   c_n[l] = Var(h_n^H v_n)        for l == n,
//   c_n[l] = E[|h_l^H v_n|^2]      otherwise,
//   noise[n] = E[||v_n||^2] / |E[h_n^H v_n]|^2,
// all expectations replaced by empirical averages over the sample set
// (the variance uses the unbiased estimator, hence n_samples >= 2).
struct UatFProblem {
  int n = 0;
  Eigen::MatrixXd coupling;  // n x n, strictly positive
  Eigen::VectorXd noise;     // strictly positive
  Eigen::VectorXd weights;   // strictly positive
  double p_max = 0.0;
};

UatFProblem build_uatf_problem(const NetworkLayout& layout,
                               const ChannelSampleSet& channels, double p_max,
                               const Eigen::VectorXd& weights = Eigen::VectorXd());

// Constraint family of the problem: members coupling + noise * a_l^T with
// a_l = e_l / p_max (per-user power cap as a scaled max-norm).
specrad::MaxLinearFamily family_from_problem(const UatFProblem& problem);

// JSON round trip. Schema:
//   {"n": int, "M": [[row], ...], "u": [...], "w": [...], "p_max": real}
// with all entries finite and strictly positive.
std::string problem_to_json(const UatFProblem& problem);
UatFProblem problem_from_json(const std::string& text);
void save_problem(const UatFProblem& problem, const std::string& path);
UatFProblem load_problem(const std::string& path);

}  // namespace sumrate::scenario
