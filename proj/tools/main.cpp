// Command-line driver: scenario generation, the two sum-rate solvers, power
// recovery, convexity diagnostics, the WMMSE baseline, and batch sweeps.
// Every run is reproducible from the input file plus the flags, which are
// echoed into the CSV comment line or the JSON "params" object of the output.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumrate/diagnostics.hpp"
#include "sumrate/errors.hpp"
#include "sumrate/hsd.hpp"
#include "sumrate/recover.hpp"
#include "sumrate/scenario.hpp"
#include "sumrate/specrad.hpp"
#include "sumrate/wmmse.hpp"

namespace {

using Eigen::VectorXd;
using nlohmann::json;
using namespace sumrate;

// Offset used to derive the channel seed from the layout seed so the two
// generators never share a stream.
constexpr std::uint64_t kChannelSeedOffset = 0x9E3779B97F4A7C15ULL;

struct ProblemBundle {
  scenario::UatFProblem problem;
  specrad::MaxLinearFamily family;
  recover::InterferenceModel model;
};

ProblemBundle load_bundle(const std::string& path) {
  scenario::UatFProblem problem = scenario::load_problem(path);
  return {problem, scenario::family_from_problem(problem),
          recover::InterferenceModel(problem.coupling, problem.noise, problem.p_max)};
}

// `--init` accepts a scalar (constant vector) or a JSON list of length n.
VectorXd parse_init(const std::string& text, int n) {
  const auto trimmed_begin = text.find_first_not_of(" \t");
  if (trimmed_begin != std::string::npos && text[trimmed_begin] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw InvalidConfigError(std::string("--init: not valid JSON: ") + e.what());
    }
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
      throw InvalidConfigError("--init: JSON list must have one entry per user");
    }
    VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      if (!j[i].is_number()) {
        throw InvalidConfigError("--init: list entries must be numbers");
      }
      v[i] = j[i].get<double>();
    }
    return v;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidConfigError("--init: expected a number or a JSON list");
  }
  if (text.find_first_not_of(" \t", used) != std::string::npos) {
    throw InvalidConfigError("--init: trailing characters after the number");
  }
  return VectorXd::Constant(n, value);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open for writing: " + path);
  }
  out << content;
  if (!out.good()) {
    throw Error("write failed: " + path);
  }
}

void write_trace_csv(const IterTrace& trace, const std::string& path,
                     const std::string& flags) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open for writing: " + path);
  }
  trace.write_csv(out, flags);
  if (!out.good()) {
    throw Error("write failed: " + path);
  }
}

std::string solution_json_with_params(const recover::RecoveredSolution& sol,
                                      const VectorXd& weights, const json& params) {
  json j = json::parse(recover::to_json(sol, weights));
  j["params"] = params;
  return j.dump(2);
}

// ------------------------------------------------------------- generate

struct GenerateOpts {
  int users = 3, aps = 4, antennas = 2, serve = 2, samples = 100;
  double side = 100.0;
  double pmax = 0.0;  // 0: use 5 * max noise coefficient
  std::uint64_t seed = 1;
  std::string out;
};

int run_generate(const GenerateOpts& o) {
  scenario::LayoutParams params;
  params.n_users = o.users;
  params.n_aps = o.aps;
  params.antennas_per_ap = o.antennas;
  params.side_m = o.side;
  params.serve_count = o.serve;
  const auto layout = scenario::generate_layout(params, o.seed);
  const auto channels =
      scenario::sample_channels(layout, o.samples, o.seed ^ kChannelSeedOffset);
  auto problem = scenario::build_uatf_problem(layout, channels, 1.0);
  problem.p_max = o.pmax > 0.0 ? o.pmax : 5.0 * problem.noise.maxCoeff();

  json j = json::parse(scenario::problem_to_json(problem));
  j["params"] = {{"users", o.users},     {"aps", o.aps},
                 {"antennas", o.antennas}, {"side", o.side},
                 {"serve", o.serve},     {"samples", o.samples},
                 {"seed", o.seed},       {"pmax_flag", o.pmax},
                 {"p_max", problem.p_max}};
  write_text_file(o.out, j.dump(2) + "\n");
  std::cout << "wrote " << o.out << " (n=" << problem.n
            << ", p_max=" << problem.p_max << ")\n";
  return 0;
}

// ------------------------------------------------------------- solvers

struct SolveOpts {
  std::string in, out, solution;
  int iters = 2000;
  double a = 0.4, q = 0.999, b = 50.0, tol = 1e-4;
  std::string init = "0.5";
  bool early_exit = false;
};

std::string solve_flags(const char* name, const SolveOpts& o) {
  std::ostringstream s;
  s << name << " -i " << o.in << " --iters " << o.iters << " --a " << o.a
    << " --q " << o.q << " --b " << o.b << " --init " << o.init << " --tol "
    << o.tol;
  if (o.early_exit) {
    s << " --early-exit";
  }
  return s.str();
}

json solve_params(const char* name, const SolveOpts& o) {
  return {{"command", name}, {"input", o.in},   {"iters", o.iters},
          {"a", o.a},        {"q", o.q},        {"b", o.b},
          {"init", o.init},  {"tol", o.tol},    {"early_exit", o.early_exit}};
}

int run_solve(const SolveOpts& o, bool rate_domain) {
  const char* name = rate_domain ? "solve-rate" : "solve-sinr";
  const auto bundle = load_bundle(o.in);
  const int n = bundle.problem.n;

  hsd::SolverConfig cfg = rate_domain ? hsd::SolverConfig::rate_defaults(n)
                                      : hsd::SolverConfig::sinr_defaults(n);
  cfg.max_iter = o.iters;
  cfg.schedule = hsd::StepSchedule(o.a, o.q);
  cfg.box_bound = o.b;
  cfg.feasibility_tol = o.tol;
  cfg.initial_point = parse_init(o.init, n);
  cfg.weights = bundle.problem.weights;
  cfg.early_exit = o.early_exit;

  const IterTrace trace = rate_domain ? hsd::solve_rate(bundle.family, cfg)
                                      : hsd::solve_sinr(bundle.family, cfg);
  write_trace_csv(trace, o.out, solve_flags(name, o));

  const auto& last = trace.final_record();
  std::cout << name << ": " << last.iter << " iterations, objective "
            << last.objective << ", gamma " << last.gamma << "\n";
  if (trace.hit_box_bound()) {
    std::cerr << "warning: iterates touched the box bound --b " << o.b
              << "; consider a larger bound\n";
  }

  if (!o.solution.empty()) {
    // SINR-domain solutions are converted to rates first.
    const VectorXd r_star = rate_domain
                                ? last.point
                                : last.point.array().log1p().matrix().eval();
    const auto sol = recover::recover_power(bundle.model, r_star);
    json params = solve_params(name, o);
    params["solver_objective"] = last.objective;
    write_text_file(o.solution,
                    solution_json_with_params(sol, bundle.problem.weights, params) + "\n");
    std::cout << "recovered power written to " << o.solution << "\n";
  }
  return 0;
}

// ------------------------------------------------------------- recover

struct RecoverOpts {
  std::string in, rates, out;
  double fp_tol = 1e-12, feas_tol = 1e-3;
  int max_iter = 100000;
};

VectorXd parse_rate_targets(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open rates file: " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("rates file: parse error: ") + e.what());
  }
  json arr;
  bool from_sinr = false;
  if (j.is_array()) {
    arr = j;
  } else if (j.is_object() && j.contains("r")) {
    arr = j["r"];
  } else if (j.is_object() && j.contains("s")) {
    arr = j["s"];
    from_sinr = true;
  } else if (j.is_object() && j.contains("achieved_rates")) {
    arr = j["achieved_rates"];  // solution file from solve-* --solution
  } else {
    throw SchemaError(
        "rates file: expected a list, or an object with \"r\", \"s\", or "
        "\"achieved_rates\"");
  }
  if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
    throw SchemaError("rates file: need one entry per user");
  }
  VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    if (!arr[i].is_number()) {
      throw SchemaError("rates file: entries must be numbers");
    }
    r[i] = arr[i].get<double>();
    if (from_sinr) {
      r[i] = std::log1p(r[i]);
    }
  }
  return r;
}

int run_recover(const RecoverOpts& o) {
  const auto bundle = load_bundle(o.in);
  const VectorXd r_star = parse_rate_targets(o.rates, bundle.problem.n);
  const auto sol =
      recover::recover_power(bundle.model, r_star, o.fp_tol, o.max_iter, o.feas_tol);
  const json params = {{"command", "recover"},   {"input", o.in},
                       {"rates", o.rates},       {"fp_tol", o.fp_tol},
                       {"feas_tol", o.feas_tol}, {"max_iter", o.max_iter}};
  write_text_file(o.out,
                  solution_json_with_params(sol, bundle.problem.weights, params) + "\n");
  std::cout << "recover: sum_rate " << bundle.problem.weights.dot(sol.achieved)
            << ", residual " << sol.residual << "\n";
  return 0;
}

// ------------------------------------------------------------ diagnose

struct DiagnoseOpts {
  std::string in, out, domain = "both";
  int pairs = 10000, alphas = 99;
  double box = 5.0;
  double eps = -1.0;  // negative: per-domain default (rate 1e-12, sinr 1e-13)
  std::uint64_t seed = 1;
};

int run_diagnose(const DiagnoseOpts& o) {
  const auto bundle = load_bundle(o.in);
  json out;
  out["inverse_z"] = diagnostics::family_inverse_z(bundle.family);
  if (o.domain == "both" || o.domain == "rate") {
    const double slack = o.eps >= 0.0 ? o.eps : 1e-12;
    const auto report = diagnostics::check_rate_convexity_samples(
        bundle.family, o.pairs, o.box, o.alphas, o.seed, slack);
    out["rate"] = json::parse(diagnostics::to_json(report));
  }
  if (o.domain == "both" || o.domain == "sinr") {
    const double slack = o.eps >= 0.0 ? o.eps : 1e-13;
    const auto report = diagnostics::check_sinr_convexity_samples(
        bundle.family, o.pairs, o.box, o.alphas, o.seed, slack);
    out["sinr"] = json::parse(diagnostics::to_json(report));
  }
  out["params"] = {{"command", "diagnose"}, {"input", o.in},   {"pairs", o.pairs},
                   {"box", o.box},          {"alphas", o.alphas}, {"eps", o.eps},
                   {"seed", o.seed},        {"domain", o.domain}};
  write_text_file(o.out, out.dump(2) + "\n");
  long long violations = 0;
  for (const char* key : {"rate", "sinr"}) {
    if (out.contains(key)) {
      violations += out[key]["violations"].get<long long>();
    }
  }
  std::cout << "diagnose: inverse_z=" << (out["inverse_z"].get<bool>() ? "yes" : "no")
            << ", violations=" << violations << "\n";
  return 0;
}

// -------------------------------------------------------------- wmmse

struct WmmseOpts {
  std::string in, out, init = "full";
  int iters = 10000;
  double tol = 1e-10;
};

int run_wmmse(const WmmseOpts& o) {
  const auto bundle = load_bundle(o.in);
  const int n = bundle.problem.n;
  VectorXd p0(n);
  if (o.init == "full") {
    p0.setConstant(bundle.problem.p_max);
  } else if (o.init == "alt") {
    for (int i = 0; i < n; ++i) {
      p0[i] = i % 2 == 0 ? bundle.problem.p_max : 0.0;
    }
  } else {
    throw InvalidConfigError("--init must be 'full' or 'alt'");
  }
  wmmse::Options opts;
  opts.max_iter = o.iters;
  opts.power_tol = o.tol;
  const auto trace = wmmse::solve(bundle.model, bundle.problem.weights, p0, opts);
  std::ostringstream flags;
  flags << "wmmse -i " << o.in << " --init " << o.init << " --iters " << o.iters
        << " --tol " << o.tol;
  write_trace_csv(trace, o.out, flags.str());
  std::cout << "wmmse: " << trace.records().size() << " iterations, objective "
            << trace.final_record().objective << "\n";
  return 0;
}

// --------------------------------------------------------------- sweep

struct SweepOpts {
  int count = 200;
  std::uint64_t seed = 1;
  int users = 3, aps = 4, antennas = 2, serve = 2, samples = 100;
  double side = 100.0, pmax = 0.0;
  int jobs = 0;  // 0: hardware concurrency
  int pairs = 300, alphas = 17;
  double box = 3.0;
  bool skip_convexity = false;
  std::string out;
};

struct SweepResult {
  bool inverse_z = false;
  bool checked = false;
  long long violations = 0;
  double worst_gap = 0.0;
};

int run_sweep(const SweepOpts& o) {
  if (o.count < 1) {
    throw InvalidConfigError("--count must be at least 1");
  }
  scenario::LayoutParams params;
  params.n_users = o.users;
  params.n_aps = o.aps;
  params.antennas_per_ap = o.antennas;
  params.side_m = o.side;
  params.serve_count = o.serve;

  std::vector<SweepResult> results(o.count);
  std::atomic<int> next{0};
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int jobs = std::min(o.count, o.jobs > 0 ? o.jobs : std::max(1, hw));

  const auto worker = [&]() {
    for (int i = next.fetch_add(1); i < o.count; i = next.fetch_add(1)) {
      const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
      const auto layout = scenario::generate_layout(params, seed);
      const auto channels =
          scenario::sample_channels(layout, o.samples, seed ^ kChannelSeedOffset);
      auto problem = scenario::build_uatf_problem(layout, channels, 1.0);
      problem.p_max = o.pmax > 0.0 ? o.pmax : 5.0 * problem.noise.maxCoeff();
      const auto family = scenario::family_from_problem(problem);
      auto& res = results[i];
      res.inverse_z = diagnostics::family_inverse_z(family);
      if (res.inverse_z && !o.skip_convexity) {
        const auto report = diagnostics::check_rate_convexity_samples(
            family, o.pairs, o.box, o.alphas, seed);
        res.checked = true;
        res.violations = report.violations;
        res.worst_gap = report.worst_gap;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }

  long long z_count = 0, checked = 0, with_violations = 0, total_violations = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    z_count += r.inverse_z ? 1 : 0;
    if (r.checked) {
      ++checked;
      total_violations += r.violations;
      with_violations += r.violations > 0 ? 1 : 0;
      worst_gap = std::max(worst_gap, r.worst_gap);
    }
  }

  json j;
  j["count"] = o.count;
  j["inverse_z_count"] = z_count;
  j["inverse_z_fraction"] = static_cast<double>(z_count) / o.count;
  if (checked > 0) {
    j["convexity"] = {{"instances_checked", checked},
                      {"instances_with_violations", with_violations},
                      {"total_violations", total_violations},
                      {"worst_gap", worst_gap}};
  }
  j["params"] = {{"command", "sweep"},   {"count", o.count},   {"seed", o.seed},
                 {"users", o.users},     {"aps", o.aps},       {"antennas", o.antennas},
                 {"side", o.side},       {"serve", o.serve},   {"samples", o.samples},
                 {"pmax_flag", o.pmax},  {"jobs", jobs},       {"pairs", o.pairs},
                 {"alphas", o.alphas},   {"box", o.box},
                 {"convexity_enabled", !o.skip_convexity}};
  if (!o.out.empty()) {
    write_text_file(o.out, j.dump(2) + "\n");
  }
  std::cout << "sweep: " << o.count << " instances, inverse_z_fraction "
            << j["inverse_z_fraction"].get<double>() << ", violations "
            << total_violations << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted sum-rate maximization over spectral-radius constrained regions"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* cmd_gen = app.add_subcommand("generate", "generate a synthetic uplink instance");
  cmd_gen->add_option("--users", gen.users, "number of single-antenna users");
  cmd_gen->add_option("--aps", gen.aps, "number of access points");
  cmd_gen->add_option("--antennas", gen.antennas, "antennas per access point");
  cmd_gen->add_option("--side", gen.side, "square side length in meters");
  cmd_gen->add_option("--serve", gen.serve, "serving access points per user");
  cmd_gen->add_option("--samples", gen.samples, "channel sample count");
  cmd_gen->add_option("--seed", gen.seed, "layout seed (channel seed derived)");
  cmd_gen->add_option("--pmax", gen.pmax, "power budget; 0 picks 5 * max noise term");
  cmd_gen->add_option("-o,--out", gen.out, "output problem JSON")->required();

  SolveOpts rate_opts;
  auto* cmd_rate = app.add_subcommand("solve-rate", "rate-domain solver");
  SolveOpts sinr_opts;
  sinr_opts.a = 1.6;
  sinr_opts.b = 1e6;
  auto* cmd_sinr = app.add_subcommand("solve-sinr", "SINR-domain solver");
  for (auto [cmd, opts] :
       {std::pair{cmd_rate, &rate_opts}, std::pair{cmd_sinr, &sinr_opts}}) {
    cmd->add_option("-i,--in", opts->in, "problem JSON")->required();
    cmd->add_option("--iters", opts->iters, "iteration count");
    cmd->add_option("--a", opts->a, "step size scale a in mu_k = a k^-q");
    cmd->add_option("--q", opts->q, "step size exponent q");
    cmd->add_option("--b", opts->b, "box bound");
    cmd->add_option("--init", opts->init, "initial point: scalar or JSON list");
    cmd->add_option("--tol", opts->tol, "feasibility tolerance for the trace flag");
    cmd->add_flag("--early-exit", opts->early_exit,
                  "stop once objective and violation settle");
    cmd->add_option("-o,--out", opts->out, "output trace CSV")->required();
    cmd->add_option("--solution", opts->solution,
                    "also recover the power vector into this JSON file");
  }

  RecoverOpts rec;
  auto* cmd_rec = app.add_subcommand("recover", "power recovery from rate targets");
  cmd_rec->add_option("-i,--in", rec.in, "problem JSON")->required();
  cmd_rec->add_option("--rates", rec.rates,
                      "JSON list of rates, or object with \"r\" (rates) or \"s\" (SINRs)")
      ->required();
  cmd_rec->add_option("--fp-tol", rec.fp_tol, "fixed-point residual tolerance");
  cmd_rec->add_option("--feas-tol", rec.feas_tol, "feasibility tolerance on the targets");
  cmd_rec->add_option("--max-iter", rec.max_iter, "fixed-point iteration cap");
  cmd_rec->add_option("-o,--out", rec.out, "output power JSON")->required();

  DiagnoseOpts diag;
  auto* cmd_diag = app.add_subcommand("diagnose", "convexity and structure diagnostics");
  cmd_diag->add_option("-i,--in", diag.in, "problem JSON")->required();
  cmd_diag->add_option("--pairs", diag.pairs, "random segment pairs");
  cmd_diag->add_option("--box", diag.box, "sampling box upper bound");
  cmd_diag->add_option("--alphas", diag.alphas, "interpolation points per segment");
  cmd_diag->add_option("--eps", diag.eps, "violation slack (default per domain)");
  cmd_diag->add_option("--seed", diag.seed, "sampling seed");
  cmd_diag->add_option("--domain", diag.domain, "rate, sinr, or both")
      ->check(CLI::IsMember({"rate", "sinr", "both"}));
  cmd_diag->add_option("-o,--out", diag.out, "output report JSON")->required();

  WmmseOpts wm;
  auto* cmd_wm = app.add_subcommand("wmmse", "weighted-MMSE baseline");
  cmd_wm->add_option("-i,--in", wm.in, "problem JSON")->required();
  cmd_wm->add_option("--init", wm.init, "initialization: full or alt")
      ->check(CLI::IsMember({"full", "alt"}));
  cmd_wm->add_option("--iters", wm.iters, "iteration cap");
  cmd_wm->add_option("--tol", wm.tol, "power change tolerance");
  cmd_wm->add_option("-o,--out", wm.out, "output trace CSV")->required();

  SweepOpts sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "batch structure statistics");
  cmd_sweep->add_option("--count", sweep.count, "instance count");
  cmd_sweep->add_option("--seed", sweep.seed, "base seed; instance i uses seed+i");
  cmd_sweep->add_option("--users", sweep.users, "users per instance");
  cmd_sweep->add_option("--aps", sweep.aps, "access points");
  cmd_sweep->add_option("--antennas", sweep.antennas, "antennas per access point");
  cmd_sweep->add_option("--side", sweep.side, "square side in meters");
  cmd_sweep->add_option("--serve", sweep.serve, "serving access points per user");
  cmd_sweep->add_option("--samples", sweep.samples, "channel samples per instance");
  cmd_sweep->add_option("--pmax", sweep.pmax, "power budget; 0 picks 5 * max noise");
  cmd_sweep->add_option("--jobs", sweep.jobs, "worker threads (0: hardware)");
  cmd_sweep->add_option("--pairs", sweep.pairs, "convexity pairs per instance");
  cmd_sweep->add_option("--alphas", sweep.alphas, "interpolation points");
  cmd_sweep->add_option("--box", sweep.box, "convexity sampling box");
  cmd_sweep->add_flag("--no-convexity", sweep.skip_convexity,
                      "skip the convexity scan, report only the inverse-Z fraction");
  cmd_sweep->add_option("-o,--out", sweep.out, "output summary JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_gen) return run_generate(gen);
    if (*cmd_rate) return run_solve(rate_opts, true);
    if (*cmd_sinr) return run_solve(sinr_opts, false);
    if (*cmd_rec) return run_recover(rec);
    if (*cmd_diag) return run_diagnose(diag);
    if (*cmd_wm) return run_wmmse(wm);
    if (*cmd_sweep) return run_sweep(sweep);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
