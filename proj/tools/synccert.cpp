// synccert: certify, threshold, simulate, spectral, reproduce-table.
//
// Exit codes: 0 success / certified, 3 not certified or a validation failure,
// 64 usage error, 65 malformed input data, 66 unreadable input, 73 output
// cannot be written, 70 internal error.

#include "synccert/synccert.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace synccert;

namespace {

enum ExitCode : int {
  exit_ok = 0,
  exit_negative = 3,
  exit_usage = 64,
  exit_data = 65,
  exit_no_input = 66,
  exit_software = 70,
  exit_cant_create = 73,
};

struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

[[noreturn]] void usage(const std::string& what) { throw CliError(exit_usage, what); }

struct RunConfig {
  std::string command;
  std::optional<std::size_t> n;
  std::string p_text;
  std::uint64_t seed = 1;
  std::size_t trials = 10;
  std::string method = "auto";
  std::string norms;  // empty: pick from context
  std::string graph_path;
  std::size_t grid_size = 1000;
  std::size_t max_sweeps = 100000;
  double tol = 1e-3;     // power iteration
  double tol_p = 1e-3;   // threshold bisection
  double max_time = 5000.0;
  bool keep_table = false;
  std::string output_path;
  std::string format = "json";
  std::vector<std::size_t> n_list;
  std::optional<double> norm_a, norm_l;  // user override
};

// ---------------------------------------------------------------------------
// Input resolution

Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(exit_no_input, "cannot open graph file " + path);
  try {
    return read_edge_list(in);
  } catch (const ParseError& e) {
    throw CliError(exit_data, path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(exit_data, path + ": " + e.what());
  }
}

double parse_p(const RunConfig& cfg, const Graph* g) {
  if (cfg.p_text.empty() || cfg.p_text == "auto") {
    if (!g) usage("--p is required without --graph (auto needs a graph)");
    const double d = g->density();
    if (!(d > 0.0)) throw CliError(exit_data, "graph has no edges; --p auto is undefined");
    return d;
  }
  double p = 0.0;
  std::size_t used = 0;
  try {
    p = std::stod(cfg.p_text, &used);
  } catch (const std::exception&) {
    usage("--p must be a number in (0, 1] or 'auto'");
  }
  if (used != cfg.p_text.size() || !(p > 0.0 && p <= 1.0)) usage("--p must be a number in (0, 1] or 'auto'");
  return p;
}

struct Instance {
  std::optional<Graph> graph;
  std::size_t n = 0;
  double p = 0.0;
  std::string origin;  // "file" or "sampled"
};

/// A graph from --graph, or an ER sample from --n/--p/--seed.
Instance load_or_sample(const RunConfig& cfg) {
  Instance inst;
  if (!cfg.graph_path.empty()) {
    inst.graph = read_graph(cfg.graph_path);
    if (cfg.n && *cfg.n != inst.graph->size())
      usage("--n " + std::to_string(*cfg.n) + " disagrees with the graph size " + std::to_string(inst.graph->size()));
    inst.n = inst.graph->size();
    inst.p = parse_p(cfg, &*inst.graph);
    inst.origin = "file";
    return inst;
  }
  if (!cfg.n) usage("either --graph or --n with --p is required");
  inst.n = *cfg.n;
  inst.p = parse_p(cfg, nullptr);
  inst.graph = sample_er(inst.n, inst.p, cfg.seed);
  inst.origin = "sampled";
  return inst;
}

std::string norm_choice(const RunConfig& cfg, std::size_t n) {
  if (!cfg.norms.empty()) return cfg.norms;
  return n <= default_dense_threshold ? "exact" : "power";
}

SpectralEstimates graph_norms(const Graph& g, double p, const std::string& choice, const RunConfig& cfg) {
  if (choice == "formula") return estimates_from_formula(g.size(), p);
  PowerOptions popt;
  popt.tol = cfg.tol;
  popt.seed = cfg.seed;
  return estimates_from_graph(g, p, choice == "exact" ? NormMethod::exact : NormMethod::power, popt);
}

CertifyMethod certify_method(const std::string& m) {
  if (m == "theorem") return CertifyMethod::theorem;
  if (m == "refine") return CertifyMethod::refine;
  return CertifyMethod::automatic;
}

RefineOptions refine_options(const RunConfig& cfg) {
  RefineOptions r;
  r.grid_size = cfg.grid_size;
  r.max_sweeps = cfg.max_sweeps;
  r.keep_table = cfg.keep_table;
  return r;
}

json graph_summary(const Instance& inst) {
  return {{"origin", inst.origin}, {"n", inst.n}, {"edges", inst.graph->edge_count()},
          {"self_loops", inst.graph->self_loop_count()}, {"density", inst.graph->density()}};
}

// ---------------------------------------------------------------------------
// Output

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw CliError(exit_cant_create, "cannot write " + cfg.output_path);
  out << text;
  if (!out) throw CliError(exit_cant_create, "write failed for " + cfg.output_path);
}

void emit_json(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands

int run_certify(const RunConfig& cfg) {
  CertifyOptions copt{certify_method(cfg.method), refine_options(cfg)};
  SpectralEstimates norms;
  json input;
  if (cfg.norm_a.has_value() != cfg.norm_l.has_value()) usage("--norm-a and --norm-l go together");
  const bool user_norms = cfg.norm_a.has_value();
  if (user_norms && !cfg.norms.empty()) usage("--norms conflicts with --norm-a/--norm-l");
  if (user_norms) {
    std::size_t n = 0;
    double p = 0.0;
    if (!cfg.graph_path.empty()) {
      const Graph g = read_graph(cfg.graph_path);
      n = g.size();
      p = parse_p(cfg, &g);
    } else {
      if (!cfg.n) usage("certify needs --n or --graph");
      n = *cfg.n;
      p = parse_p(cfg, nullptr);
    }
    norms = estimates_from_values(n, p, *cfg.norm_a, *cfg.norm_l);
  } else if (!cfg.graph_path.empty()) {
    Instance inst;
    inst.graph = read_graph(cfg.graph_path);
    inst.n = inst.graph->size();
    if (cfg.n && *cfg.n != inst.n) usage("--n disagrees with the graph size");
    inst.p = parse_p(cfg, &*inst.graph);
    inst.origin = "file";
    if (inst.n < 2) throw CliError(exit_data, "graph needs at least two vertices");
    norms = graph_norms(*inst.graph, inst.p, norm_choice(cfg, inst.n), cfg);
    input = graph_summary(inst);
  } else {
    if (!cfg.n) usage("certify needs --n or --graph");
    const std::string choice = cfg.norms.empty() ? "formula" : cfg.norms;
    if (choice != "formula") usage("--norms " + choice + " needs --graph");
    if (*cfg.n < 2) usage("--n must be at least 2");
    norms = estimates_from_formula(*cfg.n, parse_p(cfg, nullptr));
  }
  const auto res = certify(norms, copt);
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_csv(res, os);
    emit(cfg, os.str());
  } else {
    json j = to_json(res);
    if (!input.is_null()) j["input"] = input;
    emit_json(cfg, j);
  }
  std::cerr << to_string(res.verdict) << " (" << to_string(res.method) << ", n=" << res.n << ", p=" << num(res.p)
            << ", confidence=" << num(res.confidence) << ")";
  if (!res.reason.empty()) std::cerr << ": " << res.reason;
  std::cerr << '\n';
  return res.certified() ? exit_ok : exit_negative;
}

std::vector<std::size_t> n_values(const RunConfig& cfg, std::vector<std::size_t> fallback) {
  if (!cfg.n_list.empty()) return cfg.n_list;
  if (cfg.n) return {*cfg.n};
  return fallback;
}

ThresholdOptions threshold_options(const RunConfig& cfg) {
  ThresholdOptions t;
  t.method = cfg.method == "theorem" ? CertifyMethod::theorem : CertifyMethod::refine;
  t.tol_p = cfg.tol_p;
  t.refine = refine_options(cfg);
  t.refine.keep_table = false;
  return t;
}

struct ThresholdRow {
  std::size_t n = 0;
  std::optional<ThresholdResult> result;
  std::string error;
  bool non_monotone = false;
};

std::vector<ThresholdRow> run_thresholds(const std::vector<std::size_t>& ns, const ThresholdOptions& opt) {
  std::vector<ThresholdRow> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    rows[i].n = ns[i];
    try {
      rows[i].result = threshold_search(ns[i], opt);
    } catch (const NonMonotoneError& e) {
      rows[i].result = e.partial();
      rows[i].error = e.what();
      rows[i].non_monotone = true;
    } catch (const std::runtime_error& e) {
      rows[i].error = e.what();
    }
  });
  return rows;
}

int run_threshold(const RunConfig& cfg) {
  const auto ns = n_values(cfg, {});
  if (ns.empty()) usage("threshold needs --n or --n-list");
  for (auto n : ns)
    if (n < 8) usage("threshold needs n >= 8");
  const auto rows = run_thresholds(ns, threshold_options(cfg));
  bool all_ok = true;
  json results = json::array();
  std::ostringstream csv;
  csv << "n,p_star,p_below,probes,monotone,error\n";
  for (const auto& r : rows) {
    json j = r.result ? to_json(*r.result) : json{{"schema", schema_version}, {"kind", "threshold"}, {"n", r.n}};
    if (!r.error.empty()) {
      j["error"] = r.error;
      all_ok = false;
      std::cerr << "n=" << r.n << ": " << r.error << '\n';
    } else {
      std::cerr << "n=" << r.n << ": p* = " << num(r.result->p_star) << " (largest failed probe "
                << num(r.result->p_below) << ")\n";
    }
    results.push_back(j);
    csv << r.n << ',' << (r.result ? num(r.result->p_star) : "") << ',' << (r.result ? num(r.result->p_below) : "")
        << ',' << (r.result ? r.result->probes.size() : 0) << ',' << (r.non_monotone ? 0 : 1) << ','
        << (r.error.empty() ? "" : "\"" + r.error + "\"") << '\n';
  }
  if (cfg.format == "csv") emit(cfg, csv.str());
  else if (results.size() == 1) emit_json(cfg, results[0]);
  else emit_json(cfg, {{"schema", schema_version}, {"kind", "threshold_list"}, {"results", results}});
  return all_ok ? exit_ok : exit_negative;
}

int run_simulate(const RunConfig& cfg) {
  if (cfg.trials == 0) usage("--trials must be positive");
  const Instance inst = load_or_sample(cfg);
  const Graph& g = *inst.graph;
  if (inst.n < 2) throw CliError(exit_data, "graph needs at least two vertices");
  const std::string choice = norm_choice(cfg, inst.n);
  const auto norms = graph_norms(g, inst.p, choice, cfg);

  IntegrateOptions iopt;
  iopt.max_time = cfg.max_time;
  std::vector<TrialRecord> trials(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t i) { trials[i] = simulate_trial(g, inst.p, norms, trial_seed(cfg.seed, i), iopt); });

  std::size_t converged = 0, stable = 0, suite_ran = 0, suite_pass = 0, twisted = 0, energy_ok = 0, half_ok = 0;
  double min_rho1 = 1.0;
  for (const auto& t : trials) {
    converged += t.converged;
    stable += t.converged && t.stable;
    suite_ran += t.suite_ran;
    suite_pass += t.suite_ran && t.suite_pass;
    energy_ok += t.energy_monotone;
    half_ok += t.half_circle_ok;
    if (t.converged) {
      min_rho1 = std::min(min_rho1, t.rho1);
      twisted += t.stable && t.rho1 < 1e-3;
    }
  }
  const bool ok = suite_pass == suite_ran && energy_ok == trials.size() && half_ok == trials.size();

  if (cfg.format == "csv") {
    std::ostringstream os;
    write_csv_header_trials(os);
    for (const auto& t : trials) write_csv_row(t, os);
    emit(cfg, os.str());
  } else {
    json arr = json::array();
    for (const auto& t : trials) arr.push_back(to_json(t));
    emit_json(cfg, {{"schema", schema_version},
                    {"kind", "simulation"},
                    {"graph", graph_summary(inst)},
                    {"p", inst.p},
                    {"seed", cfg.seed},
                    {"norms", to_json(norms)},
                    {"trials", arr},
                    {"summary",
                     {{"trials", trials.size()},
                      {"converged", converged},
                      {"stable", stable},
                      {"near_zero_rho1", twisted},
                      {"min_rho1", min_rho1},
                      {"suite_ran", suite_ran},
                      {"suite_pass", suite_pass},
                      {"energy_monotone", energy_ok},
                      {"half_circle_ok", half_ok}}}});
  }
  std::cerr << converged << "/" << trials.size() << " converged, " << stable << " stable, " << twisted
            << " with rho1 < 1e-3, min rho1 " << num(min_rho1) << ", inequality suites " << suite_pass << "/"
            << suite_ran << " pass\n";
  return ok ? exit_ok : exit_negative;
}

int run_spectral(const RunConfig& cfg) {
  const Instance inst = load_or_sample(cfg);
  if (inst.n < 2) throw CliError(exit_data, "graph needs at least two vertices");
  const std::string choice = norm_choice(cfg, inst.n);
  const auto norms = graph_norms(*inst.graph, inst.p, choice, cfg);
  const double f = f_bound(inst.n, inst.p);
  const double edge = 2.0 * std::sqrt(static_cast<double>(inst.n) * inst.p * (1.0 - inst.p));
  const double ratio = edge > 0.0 ? norms.norm_a / edge : std::nan("");
  if (cfg.format == "csv") {
    emit(cfg, "n,p,source,norm_a,norm_l,f_bound,semicircle_ratio,converged\n" + std::to_string(inst.n) + "," +
                  num(inst.p) + "," + std::string(to_string(norms.source)) + "," + num(norms.norm_a) + "," +
                  num(norms.norm_l) + "," + num(f) + "," + num(ratio) + "," + (norms.converged ? "1" : "0") + "\n");
  } else {
    json j = {{"schema", schema_version},      {"kind", "spectral"},   {"graph", graph_summary(inst)},
              {"norms", to_json(norms)},        {"f_bound", f},         {"below_f_bound", norms.norm_a < f},
              {"semicircle_ratio", detail::number(ratio)}};
    emit_json(cfg, j);
  }
  std::cerr << "||dA|| = " << num(norms.norm_a) << ", ||dL|| = " << num(norms.norm_l) << " (" << to_string(norms.source)
            << "), f(n,p) = " << num(f) << '\n';
  return norms.converged ? exit_ok : exit_negative;
}

// Published refinement thresholds for the four reference sizes.
constexpr std::array<std::pair<std::size_t, double>, 4> reference_thresholds{
    {{10000, 0.33237}, {100000, 0.07168}, {1000000, 0.01117}, {10000000, 0.00157}}};
constexpr double reference_band = 1.05;
constexpr const char* exclusion_note =
    "not reproduced: the n = 1e20 thresholds (1.58e-15 and 3.50e-16) need a multi-angle refinement outside this "
    "tool, and asymptotic statements in p >> log^2(n)/n are not checkable at finite n";

int run_reproduce_table(const RunConfig& cfg) {
  std::vector<std::size_t> defaults;
  for (const auto& [n, p] : reference_thresholds) defaults.push_back(n);
  const auto ns = n_values(cfg, defaults);
  for (auto n : ns)
    if (n < 8) usage("reproduce-table needs n >= 8");
  const auto opt = threshold_options(cfg);
  const auto rows = run_thresholds(ns, opt);
  const bool refine_rows = opt.method == CertifyMethod::refine;

  bool ok = true;
  json arr = json::array();
  std::ostringstream csv;
  csv << "n,p_star,p_below,p_reference,ratio,within_band\n";
  std::cerr << "        n         p*   reference    ratio\n";
  for (const auto& r : rows) {
    std::optional<double> ref;
    for (const auto& [n, p] : reference_thresholds)
      if (n == r.n) ref = p;
    json j = {{"n", r.n}};
    double ratio = std::nan("");
    if (r.error.empty()) {
      j["p_star"] = r.result->p_star;
      j["p_below"] = r.result->p_below;
      j["probes"] = r.result->probes.size();
    } else {
      j["error"] = r.error;
      ok = false;
    }
    if (ref) {
      j["p_reference"] = *ref;
      if (r.error.empty()) {
        ratio = r.result->p_star / *ref;
        j["ratio"] = ratio;
        j["within_band"] = ratio <= reference_band;
        if (refine_rows && ratio > reference_band) ok = false;
      }
    }
    arr.push_back(j);
    csv << r.n << ',' << (r.error.empty() ? num(r.result->p_star) : "") << ','
        << (r.error.empty() ? num(r.result->p_below) : "") << ',' << (ref ? num(*ref) : "") << ','
        << (std::isnan(ratio) ? "" : num(ratio)) << ',' << (std::isnan(ratio) ? "" : (ratio <= reference_band ? "1" : "0"))
        << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%9zu  %9.6g  %10s  %7s\n", r.n, r.error.empty() ? r.result->p_star : std::nan(""),
                  ref ? num(*ref).c_str() : "-", std::isnan(ratio) ? "-" : num(ratio).substr(0, 6).c_str());
    std::cerr << line;
  }
  std::cerr << exclusion_note << '\n';
  if (cfg.format == "csv") {
    csv << "# " << exclusion_note << '\n';
    emit(cfg, csv.str());
  } else {
    emit_json(cfg, {{"schema", schema_version},
                    {"kind", "table"},
                    {"method", refine_rows ? "refine" : "theorem"},
                    {"grid_size", opt.refine.grid_size},
                    {"tol_p", opt.tol_p},
                    {"band", reference_band},
                    {"rows", arr},
                    {"excluded", exclusion_note}});
  }
  return ok ? exit_ok : exit_negative;
}

// ---------------------------------------------------------------------------

void add_output_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--output,-o", cfg.output_path, "Write the result here instead of stdout");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_refine_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--grid-size", cfg.grid_size, "Angles in the refinement grid")->check(CLI::Range(2, 1000000));
  sub->add_option("--max-sweeps", cfg.max_sweeps, "Refinement sweep cap")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Certify global synchronization of Kuramoto oscillators on dense graphs"};
  app.require_subcommand(1);

  const auto positive = CLI::PositiveNumber;
  const auto norms_set = CLI::IsMember({"formula", "exact", "power"});

  auto* certify_cmd = app.add_subcommand("certify", "Run the certificate for (n, p) or a graph");
  certify_cmd->add_option("--n", cfg.n, "Number of oscillators");
  certify_cmd->add_option("--p", cfg.p_text, "Edge probability, or 'auto' for the graph density");
  certify_cmd->add_option("--norms", cfg.norms, "Norm source")->check(norms_set);
  certify_cmd->add_option("--graph", cfg.graph_path, "Edge-list file");
  certify_cmd->add_option("--method", cfg.method, "Certificate")->check(CLI::IsMember({"theorem", "refine", "auto"}));
  certify_cmd->add_option("--seed", cfg.seed, "Seed for power iteration");
  certify_cmd->add_option("--tol", cfg.tol, "Power iteration tolerance")->check(positive);
  certify_cmd->add_option("--norm-a", cfg.norm_a, "Use this upper bound on ||A - pJ||")->check(CLI::NonNegativeNumber);
  certify_cmd->add_option("--norm-l", cfg.norm_l, "Use this upper bound on ||L + pJ - npI||")->check(CLI::NonNegativeNumber);
  certify_cmd->add_flag("--table", cfg.keep_table, "Include the final C_phi bound table");
  add_refine_flags(certify_cmd, cfg);
  add_output_flags(certify_cmd, cfg);

  auto* threshold_cmd = app.add_subcommand("threshold", "Smallest certifiable p for formula norms");
  threshold_cmd->add_option("--n", cfg.n, "Number of oscillators");
  threshold_cmd->add_option("--n-list", cfg.n_list, "Several sizes")->delimiter(',');
  threshold_cmd->add_option("--method", cfg.method, "Certificate")->check(CLI::IsMember({"theorem", "refine"}));
  threshold_cmd->add_option("--tol-p", cfg.tol_p, "Relative bisection tolerance")->check(positive);
  add_refine_flags(threshold_cmd, cfg);
  add_output_flags(threshold_cmd, cfg);

  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate from random phases and check stable equilibria");
  simulate_cmd->add_option("--n", cfg.n, "Sample an ER graph with this many vertices");
  simulate_cmd->add_option("--p", cfg.p_text, "Edge probability, or 'auto' with --graph");
  simulate_cmd->add_option("--graph", cfg.graph_path, "Edge-list file");
  simulate_cmd->add_option("--trials", cfg.trials, "Number of random initial conditions");
  simulate_cmd->add_option("--seed", cfg.seed, "Seed for the graph and the trials");
  simulate_cmd->add_option("--norms", cfg.norms, "Norms used by the inequality suite")->check(norms_set);
  simulate_cmd->add_option("--tol", cfg.tol, "Power iteration tolerance")->check(positive);
  simulate_cmd->add_option("--max-time", cfg.max_time, "Integration time cap per trial")->check(positive);
  add_output_flags(simulate_cmd, cfg);

  auto* spectral_cmd = app.add_subcommand("spectral", "Norms of the mean-shifted adjacency and Laplacian");
  spectral_cmd->add_option("--n", cfg.n, "Sample an ER graph with this many vertices");
  spectral_cmd->add_option("--p", cfg.p_text, "Edge probability, or 'auto' with --graph");
  spectral_cmd->add_option("--graph", cfg.graph_path, "Edge-list file");
  spectral_cmd->add_option("--seed", cfg.seed, "Seed for sampling and power iteration");
  spectral_cmd->add_option("--norms", cfg.norms, "Norm method")->check(norms_set);
  spectral_cmd->add_option("--tol", cfg.tol, "Power iteration tolerance")->check(positive);
  add_output_flags(spectral_cmd, cfg);

  auto* table_cmd = app.add_subcommand("reproduce-table", "Thresholds for the reference sizes 1e4..1e7");
  table_cmd->add_option("--n-list", cfg.n_list, "Restrict to these sizes")->delimiter(',');
  table_cmd->add_option("--method", cfg.method, "Certificate")->check(CLI::IsMember({"theorem", "refine"}));
  table_cmd->add_option("--tol-p", cfg.tol_p, "Relative bisection tolerance")->check(positive);
  add_refine_flags(table_cmd, cfg);
  add_output_flags(table_cmd, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*certify_cmd) return run_certify(cfg);
    if (*threshold_cmd) {
      if (cfg.method == "auto") cfg.method = "refine";
      return run_threshold(cfg);
    }
    if (*simulate_cmd) return run_simulate(cfg);
    if (*spectral_cmd) return run_spectral(cfg);
    if (*table_cmd) {
      if (cfg.method == "auto") cfg.method = "refine";
      return run_reproduce_table(cfg);
    }
  } catch (const CliError& e) {
    std::cerr << "synccert: " << e.what() << '\n';
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "synccert: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "synccert: internal error: " << e.what() << '\n';
    return exit_software;
  }
  return exit_usage;
}
