// Python bindings for the core operations: constraint families and their
// gauge, the two sum-rate solvers, power recovery, the scenario generator,
// structure diagnostics, and the WMMSE baseline. Solver traces cross the
// boundary as dicts of numpy arrays.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <vector>

#include "sumrate/diagnostics.hpp"
#include "sumrate/errors.hpp"
#include "sumrate/hsd.hpp"
#include "sumrate/perron.hpp"
#include "sumrate/recover.hpp"
#include "sumrate/scenario.hpp"
#include "sumrate/specrad.hpp"
#include "sumrate/wmmse.hpp"

namespace py = pybind11;
using namespace sumrate;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

py::dict trace_to_dict(const IterTrace& trace) {
  const int k = static_cast<int>(trace.records().size());
  const int n = trace.dim();
  Eigen::VectorXi iters(k), active(k);
  VectorXd objective(k), gamma(k);
  Eigen::Matrix<bool, Eigen::Dynamic, 1> feasible(k);
  MatrixXd points(k, n);
  for (int i = 0; i < k; ++i) {
    const auto& rec = trace.records()[i];
    iters[i] = rec.iter;
    objective[i] = rec.objective;
    gamma[i] = rec.gamma;
    feasible[i] = rec.feasible;
    active[i] = rec.active_index;
    points.row(i) = rec.point.transpose();
  }
  py::dict d;
  d["iter"] = iters;
  d["objective"] = objective;
  d["gamma"] = gamma;
  d["feasible"] = feasible;
  d["active_index"] = active;
  d["points"] = points;
  d["hit_box_bound"] = trace.hit_box_bound();
  d["var_prefix"] = trace.var_prefix();
  return d;
}

VectorXd resolve_init(const py::object& init, const VectorXd& fallback, int n) {
  if (init.is_none()) {
    return fallback;
  }
  if (py::isinstance<py::float_>(init) || py::isinstance<py::int_>(init)) {
    return VectorXd::Constant(n, init.cast<double>());
  }
  return init.cast<VectorXd>();
}

hsd::SolverConfig make_config(const specrad::MaxLinearFamily& family, bool rate_domain,
                              int iters, double a, double q, double b,
                              const py::object& init, const VectorXd& weights,
                              double tol, bool early_exit) {
  const int n = family.dim();
  hsd::SolverConfig cfg = rate_domain ? hsd::SolverConfig::rate_defaults(n)
                                      : hsd::SolverConfig::sinr_defaults(n);
  cfg.max_iter = iters;
  cfg.schedule = hsd::StepSchedule(a, q);
  cfg.box_bound = b;
  cfg.initial_point = resolve_init(init, cfg.initial_point, n);
  if (weights.size() > 0) {
    cfg.weights = weights;
  }
  cfg.feasibility_tol = tol;
  cfg.early_exit = early_exit;
  return cfg;
}

py::dict solution_to_dict(const recover::RecoveredSolution& sol) {
  py::dict d;
  d["p_star"] = sol.p_star;
  d["support"] = sol.support;
  d["residual"] = sol.residual;
  d["achieved_rates"] = sol.achieved;
  return d;
}

py::dict report_to_dict(const diagnostics::ConvexityReport& r) {
  py::dict d;
  d["violations"] = r.violations;
  d["total_checks"] = r.total_checks;
  d["worst_gap"] = r.worst_gap;
  d["domain"] = r.domain;
  d["pairs"] = r.n_pairs;
  d["box_hi"] = r.box_hi;
  d["alphas"] = r.n_alpha;
  d["slack"] = r.slack;
  d["seed"] = r.seed;
  return d;
}

py::dict problem_to_dict(const scenario::UatFProblem& p) {
  py::dict d;
  d["n"] = p.n;
  d["M"] = p.coupling;
  d["u"] = p.noise;
  d["w"] = p.weights;
  d["p_max"] = p.p_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "weighted sum-rate maximization over spectral-radius constrained regions";

  py::register_exception<Error>(m, "SumrateError", PyExc_RuntimeError);

  py::class_<specrad::MaxLinearFamily>(m, "Family",
                                       "max-of-linear constraint family")
      .def_static("from_members",
                  [](const std::vector<MatrixXd>& members) {
                    return specrad::MaxLinearFamily::from_members(members);
                  },
                  py::arg("members"))
      .def_static(
          "from_problem",
          [](const MatrixXd& coupling, const VectorXd& noise, double p_max) {
            std::vector<VectorXd> gens;
            const int n = static_cast<int>(noise.size());
            for (int l = 0; l < n; ++l) {
              VectorXd e = VectorXd::Zero(n);
              e[l] = 1.0 / p_max;
              gens.push_back(e);
            }
            return specrad::MaxLinearFamily::from_norm(coupling, noise, gens);
          },
          py::arg("coupling"), py::arg("noise"), py::arg("p_max"),
          "members coupling + noise * e_l^T / p_max (per-user power cap)")
      .def_property_readonly("dim", &specrad::MaxLinearFamily::dim)
      .def_property_readonly("count", &specrad::MaxLinearFamily::count)
      .def("member", &specrad::MaxLinearFamily::member, py::arg("l"));

  m.def("spectral_radius",
        [](const MatrixXd& a, double tol, int max_iter) {
          return perron::spectral_radius(a, tol, max_iter);
        },
        py::arg("a"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100000);
  m.def("perron_pair",
        [](const MatrixXd& a, double tol, int max_iter) {
          const auto pair = perron::perron_pair(a, tol, max_iter);
          return py::make_tuple(pair.radius, pair.right, pair.left);
        },
        py::arg("a"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100000,
        "(radius, right, left) with ||right||_inf = 1 and left^T right = 1");
  m.def("is_inverse_z", &perron::is_inverse_z, py::arg("m"), py::arg("tol") = 1e-12);

  m.def("exp_map", &specrad::exp_map, py::arg("r"), "elementwise exp(r) - 1");
  m.def("rho_g",
        [](const specrad::MaxLinearFamily& f, const VectorXd& x) {
          return specrad::rho_g(f, x);
        },
        py::arg("family"), py::arg("x"));
  m.def("h_rate",
        [](const specrad::MaxLinearFamily& f, const VectorXd& r) {
          return specrad::h_rate(f, r);
        },
        py::arg("family"), py::arg("r"));
  m.def("subgrad_rate",
        [](const specrad::MaxLinearFamily& f, const VectorXd& r) {
          const auto s = specrad::subgrad_rate(f, r);
          return py::make_tuple(s.value, s.active_index, s.gradient);
        },
        py::arg("family"), py::arg("r"), "(value, active_index, gradient)");
  m.def("subgrad_sinr",
        [](const specrad::MaxLinearFamily& f, const VectorXd& s) {
          const auto g = specrad::subgrad_sinr(f, s);
          return py::make_tuple(g.value, g.active_index, g.gradient);
        },
        py::arg("family"), py::arg("s"));

  m.def("solve_rate",
        [](const specrad::MaxLinearFamily& family, int iters, double a, double q,
           double b, const py::object& init, const VectorXd& weights, double tol,
           bool early_exit) {
          const auto cfg = make_config(family, true, iters, a, q, b, init, weights,
                                       tol, early_exit);
          return trace_to_dict(hsd::solve_rate(family, cfg));
        },
        py::arg("family"), py::arg("iters") = 2000, py::arg("a") = 0.4,
        py::arg("q") = 0.999, py::arg("b") = 50.0, py::arg("init") = py::none(),
        py::arg("weights") = VectorXd(), py::arg("tol") = 1e-4,
        py::arg("early_exit") = false);
  m.def("solve_sinr",
        [](const specrad::MaxLinearFamily& family, int iters, double a, double q,
           double b, const py::object& init, const VectorXd& weights, double tol,
           bool early_exit) {
          const auto cfg = make_config(family, false, iters, a, q, b, init, weights,
                                       tol, early_exit);
          return trace_to_dict(hsd::solve_sinr(family, cfg));
        },
        py::arg("family"), py::arg("iters") = 2000, py::arg("a") = 1.6,
        py::arg("q") = 0.999, py::arg("b") = 1e6, py::arg("init") = py::none(),
        py::arg("weights") = VectorXd(), py::arg("tol") = 1e-4,
        py::arg("early_exit") = false);

  m.def("achieved_rates",
        [](const MatrixXd& coupling, const VectorXd& noise, double p_max,
           const VectorXd& p) {
          return recover::achieved_rates({coupling, noise, p_max}, p);
        },
        py::arg("coupling"), py::arg("noise"), py::arg("p_max"), py::arg("p"));
  m.def("recover_power",
        [](const MatrixXd& coupling, const VectorXd& noise, double p_max,
           const VectorXd& r_star, double fp_tol, int max_iter, double feas_tol) {
          return solution_to_dict(recover::recover_power(
              {coupling, noise, p_max}, r_star, fp_tol, max_iter, feas_tol));
        },
        py::arg("coupling"), py::arg("noise"), py::arg("p_max"), py::arg("r_star"),
        py::arg("fp_tol") = 1e-12, py::arg("max_iter") = 100000,
        py::arg("feas_tol") = 1e-3);

  m.def("wmmse",
        [](const MatrixXd& coupling, const VectorXd& noise, double p_max,
           const VectorXd& weights, const VectorXd& p_init, int max_iter,
           double power_tol) {
          wmmse::Options opts;
          opts.max_iter = max_iter;
          opts.power_tol = power_tol;
          return trace_to_dict(
              wmmse::solve({coupling, noise, p_max}, weights, p_init, opts));
        },
        py::arg("coupling"), py::arg("noise"), py::arg("p_max"), py::arg("weights"),
        py::arg("p_init"), py::arg("max_iter") = 10000, py::arg("power_tol") = 1e-10);

  m.def("generate_problem",
        [](int users, int aps, int antennas, double side, int serve, int samples,
           std::uint64_t seed, double p_max) {
          scenario::LayoutParams params;
          params.n_users = users;
          params.n_aps = aps;
          params.antennas_per_ap = antennas;
          params.side_m = side;
          params.serve_count = serve;
          const auto layout = scenario::generate_layout(params, seed);
          const auto channels = scenario::sample_channels(
              layout, samples, seed ^ 0x9E3779B97F4A7C15ULL);
          auto problem = scenario::build_uatf_problem(layout, channels, 1.0);
          problem.p_max = p_max > 0.0 ? p_max : 5.0 * problem.noise.maxCoeff();
          return problem_to_dict(problem);
        },
        py::arg("users") = 3, py::arg("aps") = 4, py::arg("antennas") = 2,
        py::arg("side") = 100.0, py::arg("serve") = 2, py::arg("samples") = 100,
        py::arg("seed") = 1, py::arg("p_max") = 0.0,
        "synthetic uplink instance; p_max=0 picks 5 * max noise term");

  m.def("family_inverse_z", &diagnostics::family_inverse_z, py::arg("family"));
  m.def("check_rate_convexity",
        [](const specrad::MaxLinearFamily& family, int pairs, double box_hi,
           int alphas, std::uint64_t seed, double slack) {
          return report_to_dict(diagnostics::check_rate_convexity_samples(
              family, pairs, box_hi, alphas, seed, slack));
        },
        py::arg("family"), py::arg("pairs") = 10000, py::arg("box_hi") = 5.0,
        py::arg("alphas") = 99, py::arg("seed") = 1, py::arg("slack") = 1e-12);
  m.def("check_sinr_convexity",
        [](const specrad::MaxLinearFamily& family, int pairs, double box_hi,
           int alphas, std::uint64_t seed, double slack) {
          return report_to_dict(diagnostics::check_sinr_convexity_samples(
              family, pairs, box_hi, alphas, seed, slack));
        },
        py::arg("family"), py::arg("pairs") = 10000, py::arg("box_hi") = 5.0,
        py::arg("alphas") = 99, py::arg("seed") = 1, py::arg("slack") = 1e-13);
}
