#include "sumrate/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sumrate/errors.hpp"

namespace sumrate::scenario {

namespace {

constexpr double kPathLossExponent = 3.67;
constexpr double kMinDistance = 1.0;

void validate_params(const LayoutParams& p) {
  if (p.n_users < 1 || p.n_aps < 1 || p.antennas_per_ap < 1) {
    throw InvalidConfigError("generate_layout: counts must be at least 1");
  }
  if (!(p.side_m > 0.0)) {
    throw InvalidConfigError("generate_layout: side length must be positive");
  }
  if (p.serve_count < 1 || p.serve_count > p.n_aps) {
    throw InvalidConfigError("generate_layout: serve_count must be in [1, n_aps]");
  }
}

}  // namespace

double path_gain(double distance_m) {
  return std::pow(std::max(distance_m, kMinDistance), -kPathLossExponent);
}

NetworkLayout generate_layout(const LayoutParams& params, std::uint64_t seed) {
  validate_params(params);
  NetworkLayout layout;
  layout.params = params;
  layout.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, params.side_m);
  layout.ap_positions.resize(params.n_aps, 2);
  for (int k = 0; k < params.n_aps; ++k) {
    layout.ap_positions(k, 0) = coord(rng);
    layout.ap_positions(k, 1) = coord(rng);
  }
  layout.user_positions.resize(params.n_users, 2);
  for (int n = 0; n < params.n_users; ++n) {
    layout.user_positions(n, 0) = coord(rng);
    layout.user_positions(n, 1) = coord(rng);
  }
  layout.association.resize(params.n_users);
  for (int n = 0; n < params.n_users; ++n) {
    std::vector<int> order(params.n_aps);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> gain(params.n_aps);
    for (int k = 0; k < params.n_aps; ++k) {
      const double d = (layout.ap_positions.row(k) - layout.user_positions.row(n)).norm();
      gain[k] = path_gain(d);
    }
    // Strongest gain first; equal gains fall back to the lower AP index.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return gain[a] > gain[b]; });
    order.resize(params.serve_count);
    layout.association[n] = order;
  }
  return layout;
}

ChannelSampleSet sample_channels(const NetworkLayout& layout, int n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 2) {
    throw InvalidConfigError(
        "sample_channels: at least 2 samples are required (the variance estimate "
        "is undefined otherwise)");
  }
  const auto& p = layout.params;
  ChannelSampleSet set;
  set.n_samples = n_samples;
  set.coords = p.n_aps * p.antennas_per_ap;
  set.samples.reserve(p.n_users);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n = 0; n < p.n_users; ++n) {
    Eigen::MatrixXcd h(n_samples, set.coords);
    std::vector<double> amp(p.n_aps);
    for (int k = 0; k < p.n_aps; ++k) {
      const double d = (layout.ap_positions.row(k) - layout.user_positions.row(n)).norm();
      // Unit-variance circular Gaussian per antenna scaled to the path gain:
      // each real part carries half the variance.
      amp[k] = std::sqrt(path_gain(d) / 2.0);
    }
    for (int s = 0; s < n_samples; ++s) {
      for (int k = 0; k < p.n_aps; ++k) {
        for (int a = 0; a < p.antennas_per_ap; ++a) {
          const double re = amp[k] * gauss(rng);
          const double im = amp[k] * gauss(rng);
          h(s, k * p.antennas_per_ap + a) = std::complex<double>(re, im);
        }
      }
    }
    set.samples.push_back(std::move(h));
  }
  return set;
}

UatFProblem build_uatf_problem(const NetworkLayout& layout,
                               const ChannelSampleSet& channels, double p_max,
                               const Eigen::VectorXd& weights) {
  const auto& prm = layout.params;
  const int n = prm.n_users;
  const int coords = prm.n_aps * prm.antennas_per_ap;
  if (static_cast<int>(channels.samples.size()) != n || channels.coords != coords) {
    throw DimensionError("build_uatf_problem: channel set does not match the layout");
  }
  if (channels.n_samples < 2) {
    throw InvalidConfigError("build_uatf_problem: at least 2 channel samples required");
  }
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw DomainError("build_uatf_problem: p_max must be positive and finite");
  }
  Eigen::VectorXd w = weights;
  if (w.size() == 0) {
    w = Eigen::VectorXd::Ones(n);
  }
  if (w.size() != n) {
    throw DimensionError("build_uatf_problem: weights size mismatch");
  }
  if (!(w.array() > 0.0).all() || !w.allFinite()) {
    throw DomainError("build_uatf_problem: weights must be entrywise positive");
  }

  const int s_count = channels.n_samples;

  // Conjugate beamformer of user n = its own channel sample restricted to the
  // serving coordinates. Masks depend only on the association.
  std::vector<Eigen::ArrayXd> mask(n, Eigen::ArrayXd::Zero(coords));
  for (int u = 0; u < n; ++u) {
    for (int ap : layout.association[u]) {
      for (int a = 0; a < prm.antennas_per_ap; ++a) {
        mask[u][ap * prm.antennas_per_ap + a] = 1.0;
      }
    }
  }

  UatFProblem problem;
  problem.n = n;
  problem.coupling.resize(n, n);
  problem.noise.resize(n);
  problem.weights = w;
  problem.p_max = p_max;

  for (int u = 0; u < n; ++u) {
    // h_u^H v_u = ||masked h_u||^2 is real; its empirical mean and unbiased
    // variance drive the direct-link statistics.
    Eigen::ArrayXd direct(s_count);
    double v_power = 0.0;
    for (int s = 0; s < s_count; ++s) {
      const Eigen::ArrayXcd masked = channels.samples[u].row(s).transpose().array() * mask[u];
      direct[s] = masked.abs2().sum();
      v_power += masked.abs2().sum();
    }
    v_power /= s_count;
    const double mean_direct = direct.mean();
    if (!(mean_direct > 0.0)) {
      throw DegenerateChannelError(
          "build_uatf_problem: empirical mean beamforming gain is zero");
    }
    const double var_direct =
        (direct - mean_direct).square().sum() / (s_count - 1);
    const double denom = mean_direct * mean_direct;

    for (int l = 0; l < n; ++l) {
      if (l == u) {
        problem.coupling(u, u) = var_direct / denom;
      } else {
        // E|h_l^H v_u|^2 with v_u = masked h_u, averaged over paired samples.
        double cross = 0.0;
        for (int s = 0; s < s_count; ++s) {
          const Eigen::ArrayXcd vu = channels.samples[u].row(s).transpose().array() * mask[u];
          const std::complex<double> ip =
              (channels.samples[l].row(s).transpose().array().conjugate() * vu).sum();
          cross += std::norm(ip);
        }
        problem.coupling(u, l) = cross / s_count / denom;
      }
    }
    problem.noise[u] = v_power / denom;
  }

  if (!(problem.coupling.array() > 0.0).all() || !(problem.noise.array() > 0.0).all()) {
    throw NonPositiveEntryError(
        "build_uatf_problem: a coupling/noise entry is not strictly positive "
        "(degenerate channel statistics)");
  }
  return problem;
}

specrad::MaxLinearFamily family_from_problem(const UatFProblem& problem) {
  std::vector<Eigen::VectorXd> gens;
  gens.reserve(problem.n);
  for (int l = 0; l < problem.n; ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(problem.n);
    e[l] = 1.0 / problem.p_max;
    gens.push_back(std::move(e));
  }
  return specrad::MaxLinearFamily::from_norm(problem.coupling, problem.noise, gens);
}

std::string problem_to_json(const UatFProblem& problem) {
  nlohmann::json j;
  j["n"] = problem.n;
  auto rows = nlohmann::json::array();
  for (int i = 0; i < problem.n; ++i) {
    rows.push_back(std::vector<double>(problem.coupling.row(i).begin(),
                                       problem.coupling.row(i).end()));
  }
  j["M"] = rows;
  j["u"] = std::vector<double>(problem.noise.begin(), problem.noise.end());
  j["w"] = std::vector<double>(problem.weights.begin(), problem.weights.end());
  j["p_max"] = problem.p_max;
  return j.dump(2);
}

namespace {

Eigen::VectorXd vector_field(const nlohmann::json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array() || static_cast<int>(j[key].size()) != n) {
    throw SchemaError(std::string("problem json: '") + key + "' must be an array of length n");
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[key][i].is_number()) {
      throw SchemaError(std::string("problem json: '") + key + "' entries must be numbers");
    }
    v[i] = j[key][i].get<double>();
  }
  if (!(v.array() > 0.0).all() || !v.allFinite()) {
    throw SchemaError(std::string("problem json: '") + key + "' entries must be positive and finite");
  }
  return v;
}

}  // namespace

UatFProblem problem_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("problem json: parse error: ") + e.what());
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw SchemaError("problem json: missing integer field 'n'");
  }
  const int n = j["n"].get<int>();
  if (n < 1) {
    throw SchemaError("problem json: 'n' must be at least 1");
  }
  UatFProblem problem;
  problem.n = n;
  if (!j.contains("M") || !j["M"].is_array() || static_cast<int>(j["M"].size()) != n) {
    throw SchemaError("problem json: 'M' must be an array of n rows");
  }
  problem.coupling.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j["M"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw SchemaError("problem json: each row of 'M' must have n entries");
    }
    for (int c = 0; c < n; ++c) {
      if (!row[c].is_number()) {
        throw SchemaError("problem json: 'M' entries must be numbers");
      }
      problem.coupling(i, c) = row[c].get<double>();
    }
  }
  if (!(problem.coupling.array() > 0.0).all() || !problem.coupling.allFinite()) {
    throw SchemaError("problem json: 'M' entries must be positive and finite");
  }
  problem.noise = vector_field(j, "u", n);
  problem.weights = vector_field(j, "w", n);
  if (!j.contains("p_max") || !j["p_max"].is_number()) {
    throw SchemaError("problem json: missing numeric field 'p_max'");
  }
  problem.p_max = j["p_max"].get<double>();
  if (!(problem.p_max > 0.0) || !std::isfinite(problem.p_max)) {
    throw SchemaError("problem json: 'p_max' must be positive and finite");
  }
  return problem;
}

void save_problem(const UatFProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("save_problem: cannot open '" + path + "' for writing");
  }
  out << problem_to_json(problem) << '\n';
  if (!out) {
    throw Error("save_problem: write to '" + path + "' failed");
  }
}

UatFProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("load_problem: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return problem_from_json(buf.str());
}

}  // namespace sumrate::scenario
