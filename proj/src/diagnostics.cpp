#include "sumrate/diagnostics.hpp"

#include <random>

#include "json.hpp"
#include "sumrate/errors.hpp"
#include "sumrate/perron.hpp"

namespace sumrate::diagnostics {

namespace {

enum class Domain { kRate, kSinr };

ConvexityReport run_scan(const specrad::MaxLinearFamily& family, Domain domain,
                         int n_pairs, double box_hi, int n_alpha,
                         std::uint64_t seed, double slack) {
  if (n_pairs < 1 || n_alpha < 1) {
    throw InvalidConfigError("convexity scan: n_pairs and n_alpha must be at least 1");
  }
  if (!(box_hi > 0.0)) {
    throw InvalidConfigError("convexity scan: box_hi must be positive");
  }
  if (!(slack >= 0.0)) {
    throw InvalidConfigError("convexity scan: slack must be nonnegative");
  }

  const auto value = [&](int l, const Eigen::VectorXd& point) {
    if (domain == Domain::kRate) {
      return specrad::member_radius(family, l, specrad::exp_map(point.cwiseMax(0.0)));
    }
    return specrad::member_radius(family, l, point);
  };

  std::vector<double> alphas(n_alpha);
  if (n_alpha == 1) {
    alphas[0] = 0.5;
  } else {
    for (int j = 0; j < n_alpha; ++j) {
      alphas[j] = 0.01 + j * (0.98 / (n_alpha - 1));
    }
  }

  ConvexityReport report;
  report.domain = domain == Domain::kRate ? "rate" : "sinr";
  report.n_pairs = n_pairs;
  report.box_hi = box_hi;
  report.n_alpha = n_alpha;
  report.slack = slack;
  report.seed = seed;
  report.worst_gap = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, box_hi);
  const int n = family.dim();
  Eigen::VectorXd x1(n), x2(n), mid(n);
  for (int pair = 0; pair < n_pairs; ++pair) {
    for (int i = 0; i < n; ++i) {
      x1[i] = coord(rng);
    }
    for (int i = 0; i < n; ++i) {
      x2[i] = coord(rng);
    }
    for (int l = 0; l < family.count(); ++l) {
      const double end1 = value(l, x1);
      const double end2 = value(l, x2);
      for (const double alpha : alphas) {
        mid = alpha * x1 + (1.0 - alpha) * x2;
        const double gap = value(l, mid) - (alpha * end1 + (1.0 - alpha) * end2);
        report.worst_gap = std::max(report.worst_gap, gap);
        if (gap > slack) {
          ++report.violations;
        }
        ++report.total_checks;
      }
    }
  }
  return report;
}

}  // namespace

std::string to_json(const ConvexityReport& report) {
  nlohmann::json j;
  j["violations"] = report.violations;
  j["total_checks"] = report.total_checks;
  j["worst_gap"] = report.worst_gap;
  j["params"] = {{"domain", report.domain}, {"pairs", report.n_pairs},
                 {"box_hi", report.box_hi}, {"alphas", report.n_alpha},
                 {"slack", report.slack},   {"seed", report.seed}};
  return j.dump(2);
}

ConvexityReport check_rate_convexity_samples(const specrad::MaxLinearFamily& family,
                                             int n_pairs, double box_hi, int n_alpha,
                                             std::uint64_t seed, double slack) {
  return run_scan(family, Domain::kRate, n_pairs, box_hi, n_alpha, seed, slack);
}

ConvexityReport check_sinr_convexity_samples(const specrad::MaxLinearFamily& family,
                                             int n_pairs, double box_hi, int n_alpha,
                                             std::uint64_t seed, double slack) {
  return run_scan(family, Domain::kSinr, n_pairs, box_hi, n_alpha, seed, slack);
}

bool family_inverse_z(const specrad::MaxLinearFamily& family) {
  for (int l = 0; l < family.count(); ++l) {
    if (!perron::is_inverse_z(family.member(l))) {
      return false;
    }
  }
  return true;
}

double inverse_z_fraction(const std::vector<scenario::UatFProblem>& problems) {
  if (problems.empty()) {
    throw InvalidConfigError("inverse_z_fraction: empty problem batch");
  }
  int hits = 0;
  for (const auto& problem : problems) {
    if (family_inverse_z(scenario::family_from_problem(problem))) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(problems.size());
}

}  // namespace sumrate::diagnostics
