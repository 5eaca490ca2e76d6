#include "homog/cli.hpp"

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "homog/acceptance.hpp"
#include "homog/cell.hpp"
#include "homog/config.hpp"
#include "homog/energy.hpp"
#include "homog/gammalab.hpp"
#include "homog/serialization.hpp"

namespace homog::cli {

namespace {

namespace fs = std::filesystem;

// Flag values; unset ones leave the config file (or defaults) alone.
struct Overrides {
  std::string config_path;
  std::optional<double> alpha, beta, lambda, M, eps, t, c, g1_tol, limit_tol;
  std::optional<std::string> kernel_path, potential, method, mode, function_path, output_dir;
  std::optional<std::vector<double>> eps_grid, t_grid, s_grid, M_grid;
  std::optional<int> t_steps;
  std::optional<std::size_t> n, k, quadrature_n;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

void add_common_options(CLI::App& sub, Overrides& o) {
  sub.add_option("--config", o.config_path, "JSON config file; flags override its fields");
  sub.add_option("--alpha", o.alpha, "kernel value near integers");
  sub.add_option("--beta", o.beta, "kernel value away from integers");
  sub.add_option("--lambda", o.lambda, "measure of the alpha region per period, in (0,1)");
  sub.add_option("--kernel", o.kernel_path, "JSON file {breakpoints, values} replacing alpha/beta/lambda");
  sub.add_option("--potential", o.potential, "infinite | finite");
  sub.add_option("--M", o.M, "value of f_M away from the wells");
  sub.add_option("--eps-grid", o.eps_grid, "list of eps values");
  sub.add_option("--t-grid", o.t_grid, "list of t values in [0,1]");
  sub.add_option("--s-grid", o.s_grid, "list of s values in (0,1)");
  sub.add_option("--M-grid", o.M_grid, "list of M values");
  sub.add_option("--t-steps", o.t_steps, "uniform t grid size when --t-grid is absent");
  sub.add_option("--eps", o.eps, "single eps");
  sub.add_option("--t", o.t, "volume fraction");
  sub.add_option("--c", o.c, "target constant");
  sub.add_option("--n", o.n, "cell discretization size");
  sub.add_option("--k", o.k, "number of ones for the discrete problem");
  sub.add_option("--method", o.method, "closed_form | projected_gradient | brute_force");
  sub.add_option("--mode", o.mode, "all_subsets | arcs_only");
  sub.add_option("--function", o.function_path, "JSON step function {breakpoints, values}");
  sub.add_option("--quadrature-n", o.quadrature_n, "also run the midpoint oracle on an n x n grid");
  sub.add_option("--g1-tol", o.g1_tol, "non-representability threshold");
  sub.add_option("--limit-tol", o.limit_tol, "tolerance for reproducing a limit at finite eps");
  sub.add_option("--output-dir", o.output_dir, "directory for JSON and CSV outputs");
  sub.add_option("--threads", o.threads, "worker threads");
  sub.add_option("--seed", o.seed, "seed for randomized suites");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (const char* env = std::getenv("HOMOG_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw ConfigError("HOMOG_THREADS must be a positive integer");
    cfg.threads = static_cast<unsigned>(v);
  }
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(cfg.alpha, o.alpha);
  set(cfg.beta, o.beta);
  set(cfg.lambda, o.lambda);
  if (o.kernel_path) cfg.kernel = read_json_file(*o.kernel_path);
  set(cfg.potential, o.potential);
  set(cfg.M, o.M);
  set(cfg.eps_grid, o.eps_grid);
  set(cfg.t_grid, o.t_grid);
  set(cfg.s_grid, o.s_grid);
  set(cfg.M_grid, o.M_grid);
  set(cfg.t_steps, o.t_steps);
  set(cfg.eps, o.eps);
  set(cfg.t, o.t);
  set(cfg.c, o.c);
  if (o.n) cfg.n = o.n;
  if (o.k) cfg.k_ones = o.k;
  set(cfg.method, o.method);
  set(cfg.mode, o.mode);
  set(cfg.function_path, o.function_path);
  set(cfg.quadrature_n, o.quadrature_n);
  set(cfg.tolerances.g1, o.g1_tol);
  set(cfg.tolerances.limit, o.limit_tol);
  set(cfg.output_dir, o.output_dir);
  set(cfg.threads, o.threads);
  set(cfg.seed, o.seed);
  validate(cfg);
  return cfg;
}

std::vector<double> default_eps_grid(const RunConfig& cfg) {
  if (!cfg.eps_grid.empty()) return cfg.eps_grid;
  const std::array ms{8, 16, 32, 64, 128, 256};
  return reciprocal_grid(ms);
}

struct Output {
  nlohmann::json json;
  std::string csv;     // empty: no CSV for this subcommand
  std::string summary;
  int code = 0;
};

nlohmann::json envelope(const std::string& command, const RunConfig& cfg) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", to_json(cfg)}};
}

std::string kernel_line(const RunConfig& cfg) {
  std::ostringstream s;
  if (cfg.kernel) s << "kernel " << cfg.kernel->dump();
  else s << "alpha=" << cfg.alpha << ", beta=" << cfg.beta << ", lambda=" << cfg.lambda;
  return s.str();
}

Output run_energy(const RunConfig& cfg, const Executor& exec) {
  if (cfg.function_path.empty()) throw ConfigError("energy: field 'function' (--function) is required");
  StepFunction u;
  try {
    u = step_function_from_json(read_json_file(cfg.function_path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.function_path + ": " + e.what());
  }
  const auto kernel = cfg.resolved_kernel();
  const auto pot = cfg.resolved_potential();
  const auto report = evaluate(u, pot, kernel, cfg.eps, exec);
  Output out;
  out.json = envelope("energy", cfg);
  out.json["function"] = to_json(u);
  out.json["kernel"] = to_json(kernel);
  out.json["potential"] = to_json(pot);
  out.json["exact"] = to_json(report);
  std::ostringstream csv, sum;
  csv << "method,eps,value,bound\n";
  csv << "exact," << csv_number(cfg.eps) << ","
      << (report.value.is_finite() ? csv_number(report.value.value()) : std::string("inf")) << ",0\n";
  sum << "Energy of a " << u.interval_count() << "-interval step function at eps=" << cfg.eps << " with "
      << kernel_line(cfg) << ": " << report.value << " (exact).";
  if (cfg.quadrature_n > 0) {
    const auto quad = evaluate_quadrature(u, pot, kernel, cfg.eps, static_cast<int>(cfg.quadrature_n), exec);
    out.json["quadrature"] = to_json(quad);
    csv << "quadrature," << csv_number(cfg.eps) << ","
        << (quad.value.is_finite() ? csv_number(quad.value.value()) : std::string("inf")) << ","
        << csv_number(quad.bound) << "\n";
    sum << " Midpoint oracle: " << quad.value << " with a-priori bound " << quad.bound << ".";
  }
  out.csv = csv.str();
  out.summary = sum.str();
  return out;
}

Output run_gamma_table(const RunConfig& cfg) {
  std::vector<double> ts = cfg.t_grid;
  if (ts.empty())
    for (int i = 0; i < cfg.t_steps; ++i) ts.push_back(static_cast<double>(i) / (cfg.t_steps - 1));
  Output out;
  out.json = envelope("gamma-table", cfg);
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "t,gamma\n";
  double lo = INFINITY, argmin = 0.0;
  for (double t : ts) {
    const double g = gamma_closed_form(cfg.alpha, cfg.beta, cfg.lambda, t);
    rows.push_back({{"t", t}, {"gamma", g}});
    csv << csv_number(t) << "," << csv_number(g) << "\n";
    if (g < lo) lo = g, argmin = t;
  }
  out.json["rows"] = rows;
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "Cell energy gamma(t) on " << ts.size() << " points for " << kernel_line(cfg) << "; smallest value "
      << lo << " at t=" << argmin << ".";
  out.summary = sum.str();
  return out;
}

Output run_cell_solve(const RunConfig& cfg, const Executor& exec) {
  const std::size_t n = cfg.n.value_or(256);
  Output out;
  out.json = envelope("cell-solve", cfg);
  auto solve = [&]() -> CellSolveResult {
    if (cfg.method == "closed_form") return solve_closed_form(cfg.alpha, cfg.beta, cfg.lambda, cfg.t, n);
    const auto K = build_cell_matrix(cfg.resolved_kernel(), n, exec);
    if (cfg.method == "projected_gradient") {
      RelaxedOptions opts;
      opts.seed = cfg.seed;
      return solve_relaxed(K, cfg.t, opts);
    }
    if (cfg.method == "brute_force") {
      BruteForceMode mode;
      if (cfg.mode == "all_subsets") mode = BruteForceMode::all_subsets;
      else if (cfg.mode == "arcs_only") mode = BruteForceMode::arcs_only;
      else throw ConfigError("field 'mode' must be all_subsets or arcs_only");
      const std::size_t k = cfg.k_ones.value_or(static_cast<std::size_t>(std::llround(cfg.t * n)));
      if (k > n) throw ConfigError("field 'k' must not exceed n");
      return solve_brute_force(K, k, mode, exec);
    }
    throw ConfigError("field 'method' must be closed_form, projected_gradient or brute_force");
  };
  const CellSolveResult res = solve();
  out.json["result"] = to_json(res);
  std::ostringstream csv;
  csv << "index,value\n";
  for (std::size_t i = 0; i < res.profile.n(); ++i) csv << i << "," << csv_number(res.profile.values()[i]) << "\n";
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "Cell problem (" << to_string(res.method) << ", n=" << n << ", mean " << res.profile.mean()
      << "): energy " << res.energy << " after " << res.iterations << " iterations"
      << (res.converged ? "" : " without converging") << "; closed form at this t gives "
      << gamma_closed_form(cfg.alpha, cfg.beta, cfg.lambda, res.profile.mean()) << ".";
  out.summary = sum.str();
  return out;
}

Output run_cell_verify(const RunConfig& cfg, const Executor& exec) {
  const std::size_t n = cfg.n.value_or(16);
  std::vector<std::size_t> ks;
  if (cfg.k_ones) ks.push_back(*cfg.k_ones);
  else
    for (std::size_t k = 2; k <= n / 2; k += 2) ks.push_back(k);
  const auto K = build_cell_matrix(cfg.resolved_kernel(), n, exec);
  const auto orient = orientation_for(cfg.alpha, cfg.beta);
  Output out;
  out.json = envelope("cell-verify", cfg);
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "k,all_subsets_energy,arcs_only_energy,gamma_closed_form,minimizer_is_arc,matches_reference\n";
  std::size_t agree = 0;
  for (std::size_t k : ks) {
    if (k > n) throw ConfigError("field 'k' must not exceed n");
    const auto all = solve_brute_force(K, k, BruteForceMode::all_subsets, exec);
    const auto arcs = solve_brute_force(K, k, BruteForceMode::arcs_only, exec);
    const double t = static_cast<double>(k) / n;
    const bool rot = is_rotation_of(all.profile, discretize(optimal_profile(t, orient), n));
    const bool same = std::abs(all.energy - arcs.energy) <= 1e-12 * std::max(1.0, std::abs(arcs.energy));
    const double g = cfg.kernel ? NAN : gamma_closed_form(cfg.alpha, cfg.beta, cfg.lambda, t);
    if (same && rot) ++agree;
    rows.push_back({{"k", k}, {"all_subsets", to_json(all)}, {"arcs_only_energy", arcs.energy},
                    {"gamma_closed_form", std::isnan(g) ? nlohmann::json(nullptr) : nlohmann::json(g)},
                    {"minimizer_is_arc", is_cyclic_arc(all.profile)}, {"matches_reference", rot}});
    csv << k << "," << csv_number(all.energy) << "," << csv_number(arcs.energy) << "," << csv_number(g) << ","
        << is_cyclic_arc(all.profile) << "," << rot << "\n";
  }
  out.json["rows"] = rows;
  out.json["all_agree"] = agree == ks.size();
  out.csv = csv.str();
  out.code = agree == ks.size() ? 0 : 2;
  std::ostringstream sum;
  sum << "Exhaustive search on n=" << n << " agrees with the arc minimiser for " << agree << " of " << ks.size()
      << " values of k.";
  out.summary = sum.str();
  return out;
}

std::string study_csv(const ConvergenceStudy& s) {
  std::ostringstream csv;
  csv << "eps,value,limit,abs_error\n";
  for (std::size_t i = 0; i < s.eps_grid.size(); ++i)
    csv << csv_number(s.eps_grid[i]) << "," << csv_number(s.values[i]) << "," << csv_number(s.limit_ref) << ","
        << csv_number(std::abs(s.values[i] - s.limit_ref)) << "\n";
  return csv.str();
}

Output run_gamma_limit(const RunConfig& cfg, const Executor& exec) {
  const auto grid = default_eps_grid(cfg);
  auto study = run_recovery_study(cfg.c, cfg.alpha, cfg.beta, cfg.lambda, grid, SequenceKind::recovery, exec);
  const auto flat = run_recovery_study(cfg.c, cfg.alpha, cfg.beta, cfg.lambda, grid, SequenceKind::flat, exec);
  const auto cert = study_certificate(CertificateKind::gamma_limit_constant, study, cfg.tolerances.limit);
  Output out;
  out.json = envelope("gamma-limit", cfg);
  out.json["certificate"] = to_json(cert);
  out.json["flat"] = to_json(flat);
  out.csv = study_csv(study);
  out.code = exit_code(cert.verdict);
  std::ostringstream sum;
  sum << "Recovery sequence for u=" << cfg.c << " approaches " << study.limit_ref << " with final error "
      << study.final_error() << " at eps=" << grid.back();
  if (study.fitted_rate) sum << " (fitted rate " << *study.fitted_rate << ")";
  sum << "; the flat sequence stays at " << flat.values.back() << ". Verdict: " << to_string(cert.verdict) << ".";
  out.summary = sum.str();
  return out;
}

Output run_two_scale(const RunConfig& cfg) {
  const auto grid = default_eps_grid(cfg);
  const auto phi = indicator_of_arcs(optimal_profile(cfg.t, orientation_for(cfg.alpha, cfg.beta)));
  const StepFunction psi1 = cfg.function_path.empty() ? StepFunction({0.0, 0.5}, {1.0, 2.0})
                                                      : step_function_from_json(read_json_file(cfg.function_path));
  const auto psi2 = cfg.resolved_kernel().profile();
  const auto rows = two_scale_table(phi, psi1, psi2, grid);
  Output out;
  out.json = envelope("two-scale", cfg);
  nlohmann::json jr = nlohmann::json::array();
  std::ostringstream csv;
  csv << "eps,pairing,limit,abs_error\n";
  for (const auto& r : rows) {
    jr.push_back({{"eps", r.eps}, {"pairing", r.pairing}, {"limit", r.limit}, {"abs_error", r.abs_error}});
    csv << csv_number(r.eps) << "," << csv_number(r.pairing) << "," << csv_number(r.limit) << ","
        << csv_number(r.abs_error) << "\n";
  }
  out.json["phi"] = to_json(phi);
  out.json["psi1"] = to_json(psi1);
  out.json["psi2"] = to_json(psi2);
  out.json["rows"] = jr;
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "Two-scale pairing of the oscillating indicator with volume fraction " << cfg.t << " against psi1(x)a(x/eps): "
      << "limit " << (rows.empty() ? NAN : rows.back().limit) << ", error at the finest eps "
      << (rows.empty() ? NAN : rows.back().abs_error) << ".";
  out.summary = sum.str();
  return out;
}

Output run_non_rep(const RunConfig& cfg, const Executor& exec) {
  const std::vector<double> s = cfg.s_grid.empty() ? std::vector<double>{0.5, 0.25} : cfg.s_grid;
  if (s.size() < 2) throw ConfigError("field 's_grid' needs two entries");
  NonRepOptions opts;
  opts.eps_grid = cfg.eps_grid;
  opts.limit_tol = cfg.tolerances.limit;
  Certificate cert;
  try {
    cert = non_representability_certificate(cfg.alpha, cfg.beta, cfg.lambda, s[0], s[1], cfg.tolerances.g1, opts, exec);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("s_grid: ") + e.what());
  }
  const auto& p = std::get<NonRepresentabilityPayload>(cert.payload);
  Output out;
  out.json = envelope("non-rep", cfg);
  out.json["certificate"] = to_json(cert);
  std::ostringstream csv;
  csv << "s,implied_g1,step_limit,step_final_value\n";
  csv << csv_number(p.s1) << "," << csv_number(p.g1_s1) << "," << csv_number(p.step_study_s1.limit_ref) << ","
      << csv_number(p.step_study_s1.values.back()) << "\n";
  csv << csv_number(p.s2) << "," << csv_number(p.g1_s2) << "," << csv_number(p.step_study_s2.limit_ref) << ","
      << csv_number(p.step_study_s2.values.back()) << "\n";
  out.csv = csv.str();
  out.code = exit_code(cert.verdict);
  std::ostringstream sum;
  sum << "A translation-invariant density g with g(0)=" << p.g0 << " would need g(1)=" << p.g1_s1 << " from s=" << p.s1
      << " but g(1)=" << p.g1_s2 << " from s=" << p.s2 << " (difference " << p.difference
      << "); finite-eps limits reproduced: " << (p.constant_reproduced && p.steps_reproduced ? "yes" : "no")
      << ". Verdict: " << to_string(cert.verdict) << ".";
  out.summary = sum.str();
  return out;
}

Output run_fm_threshold(const RunConfig& cfg, const Executor& exec) {
  const std::vector<double> Ms = cfg.M_grid.empty() ? std::vector<double>{1, 2, 4, 8, 16, 32} : cfg.M_grid;
  const auto deviations = default_deviation_profiles(cfg.eps, cfg.alpha, cfg.beta);
  const auto cert = fM_threshold_experiment(cfg.alpha, cfg.beta, cfg.lambda, cfg.eps, Ms, deviations, exec);
  const auto& p = std::get<FmThresholdPayload>(cert.payload);
  Output out;
  out.json = envelope("fm-threshold", cfg);
  out.json["certificate"] = to_json(cert);
  std::ostringstream csv;
  csv << "M,optimum";
  for (const auto& name : p.deviation_names) csv << "," << name;
  csv << ",all_strictly_worse\n";
  for (std::size_t m = 0; m < p.M_grid.size(); ++m) {
    csv << csv_number(p.M_grid[m]) << "," << csv_number(p.optimum);
    for (double v : p.deviation_values[m]) csv << "," << csv_number(v);
    csv << "," << p.all_strictly_worse[m] << "\n";
  }
  out.csv = csv.str();
  out.code = exit_code(cert.verdict);
  std::ostringstream sum;
  sum << "At eps=" << cfg.eps << " the recovery profile scores " << p.optimum << "; ";
  if (p.threshold_M) sum << "every deviation profile is strictly worse from M=" << *p.threshold_M << " on";
  else sum << "no M on the grid makes every deviation strictly worse";
  sum << ", and admissible profiles differ between f and f_M by at most " << p.admissible_max_diff
      << ". Verdict: " << to_string(cert.verdict) << ".";
  out.summary = sum.str();
  return out;
}

Output run_reproduce_all(const RunConfig& cfg, const Executor& exec, std::ostream& log) {
  AcceptanceOptions opts;
  opts.seed = cfg.seed;
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 8; ++id) {
    results.push_back(run_criterion(id, opts, exec));
    log << format_line(results.back()) << "\n";
  }
  Output out;
  out.json = envelope("reproduce-all", cfg);
  out.json["report"] = acceptance_report(results, opts);
  std::ostringstream csv;
  csv << "id,name,passed\n";
  std::size_t passed = 0;
  for (const auto& r : results) {
    csv << r.id << "," << r.name << "," << r.passed << "\n";
    passed += r.passed;
  }
  out.csv = csv.str();
  out.code = passed == results.size() ? 0 : 2;
  out.summary = std::to_string(passed) + " of " + std::to_string(results.size()) +
                " reproducible checks passed; thread-count independence is checked by comparing two reports.";
  return out;
}

void write_outputs(const RunConfig& cfg, const std::string& stem, const Output& out) {
  fs::create_directories(cfg.output_dir);
  const fs::path base = fs::path(cfg.output_dir) / stem;
  std::ofstream(base.string() + ".json") << out.json.dump(2) << "\n";
  if (!out.csv.empty()) std::ofstream(base.string() + ".csv") << out.csv;
}

}  // namespace

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlocal energies with oscillating kernels: limits, cell problems and certificates"};
  app.require_subcommand(1);
  Overrides o;
  const std::array<std::pair<const char*, const char*>, 9> commands{{
      {"energy", "exact energy of a step function (optionally against the midpoint oracle)"},
      {"gamma-table", "closed-form cell energy on a t grid"},
      {"cell-solve", "solve the discrete cell problem"},
      {"cell-verify", "exhaustive rearrangement check of the cell minimiser"},
      {"gamma-limit", "convergence study for constant targets"},
      {"two-scale", "two-scale pairing table"},
      {"non-rep", "non-representability certificate"},
      {"fm-threshold", "finite-M potential experiment"},
      {"reproduce-all", "run every reproducible check and write a consolidated report"},
  }};
  for (const auto& [name, help] : commands) add_common_options(*app.add_subcommand(name, help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig cfg = resolve(o);
    const Executor exec(cfg.threads);
    Output result;
    if (command == "energy") result = run_energy(cfg, exec);
    else if (command == "gamma-table") result = run_gamma_table(cfg);
    else if (command == "cell-solve") result = run_cell_solve(cfg, exec);
    else if (command == "cell-verify") result = run_cell_verify(cfg, exec);
    else if (command == "gamma-limit") result = run_gamma_limit(cfg, exec);
    else if (command == "two-scale") result = run_two_scale(cfg);
    else if (command == "non-rep") result = run_non_rep(cfg, exec);
    else if (command == "fm-threshold") result = run_fm_threshold(cfg, exec);
    else result = run_reproduce_all(cfg, exec, out);
    std::string stem = command;
    for (char& ch : stem)
      if (ch == '-') ch = '_';
    write_outputs(cfg, stem, result);
    out << result.summary << "\n";
    return result.code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(int argc, char** argv) { return dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace homog::cli
