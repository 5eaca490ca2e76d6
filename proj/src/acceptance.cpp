#include "homog/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "homog/cell.hpp"
#include "homog/energy.hpp"
#include "homog/gammalab.hpp"
#include "homog/kernel.hpp"
#include "homog/serialization.hpp"
#include "homog/states.hpp"

namespace homog {

namespace {

constexpr double kAlpha = 1.0;
constexpr double kBeta = 2.0;
constexpr double kLambda = 0.5;

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

CriterionResult closed_form_consistency() {
  CriterionResult r;
  r.id = 1;
  r.name = "closed_form_consistency";
  const double g_half = gamma_closed_form(kAlpha, kBeta, kLambda, 0.5);
  const double g_const = gamma_limit_constant_value(kAlpha, kBeta, kLambda);
  double worst = std::max(std::abs(g_half - 0.625), std::abs(g_const - 0.625));
  worst = std::max(worst, std::abs(g_half - g_const));

  double branch_gap = 0.0;
  for (double tb : {kLambda / 2.0, 1.0 - kLambda / 2.0}) {
    const double h = 1e-13;
    branch_gap = std::max(branch_gap, std::abs(gamma_closed_form(kAlpha, kBeta, kLambda, tb - h) -
                                               gamma_closed_form(kAlpha, kBeta, kLambda, tb + h)));
  }
  double symmetry = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    symmetry = std::max(symmetry, std::abs(gamma_closed_form(kAlpha, kBeta, kLambda, t) -
                                           gamma_closed_form(kAlpha, kBeta, kLambda, 1.0 - t)));
  }
  r.passed = worst <= 1e-12 && branch_gap <= 1e-12 && symmetry <= 1e-12;
  r.detail = fmt("gamma(1/2)=%.15g, branch gap %.2e", g_half, branch_gap) + fmt(", symmetry %.2e", symmetry);
  r.data = {{"gamma_half", g_half}, {"gamma_limit_constant", g_const}, {"branch_gap", branch_gap},
            {"symmetry_max", symmetry}};
  r.budget_seconds = 1.0;
  return r;
}

CriterionResult discrete_rearrangement(const Executor& exec) {
  CriterionResult r;
  r.id = 2;
  r.name = "discrete_rearrangement";
  constexpr std::size_t n = 16;
  r.passed = true;
  int failures = 0, cases = 0;
  json rows = json::array();
  for (auto [alpha, beta] : {std::pair{1.0, 2.0}, std::pair{2.0, 1.0}}) {
    for (double lambda : {0.25, 0.5}) {
      const auto K = build_cell_matrix(make_lambda_kernel(alpha, beta, lambda), n, exec);
      for (std::size_t k : {2u, 4u, 6u, 8u}) {
        const auto all = solve_brute_force(K, k, BruteForceMode::all_subsets, exec);
        const auto arcs = solve_brute_force(K, k, BruteForceMode::arcs_only, exec);
        const double t = static_cast<double>(k) / n;
        const auto reference = discretize(optimal_profile(t, orientation_for(alpha, beta)), n);
        const bool energies_match = std::abs(all.energy - arcs.energy) <= 1e-12 * std::max(1.0, std::abs(arcs.energy));
        const bool rotation = is_rotation_of(all.profile, reference);
        const bool ok = energies_match && rotation;
        ++cases;
        if (!ok) ++failures;
        rows.push_back({{"alpha", alpha}, {"beta", beta}, {"lambda", lambda}, {"k", k},
                        {"all_subsets_energy", all.energy}, {"arcs_only_energy", arcs.energy},
                        {"minimizer_is_rotation", rotation}, {"passed", ok}});
      }
    }
  }
  r.passed = failures == 0;
  r.detail = std::to_string(cases - failures) + "/" + std::to_string(cases) + " cases match the arc minimiser";
  r.data = {{"cases", rows}};
  r.budget_seconds = 60.0;
  return r;
}

CriterionResult discrete_to_continuum(const Executor& exec) {
  CriterionResult r;
  r.id = 3;
  r.name = "discrete_to_continuum";
  const auto kernel = make_lambda_kernel(kAlpha, kBeta, kLambda);
  const auto arcs = optimal_profile(0.5, orientation_for(kAlpha, kBeta));
  std::vector<double> errors;
  json rows = json::array();
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto K = build_cell_matrix(kernel, n, exec);
    const double e = cell_energy(K, discretize(arcs, n));
    errors.push_back(std::abs(e - 0.625));
    rows.push_back({{"n", n}, {"energy", e}, {"abs_error", errors.back()}});
  }
  bool ok = true;
  json ratios = json::array();
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i + 1] > 0.0 ? errors[i] / errors[i + 1] : INFINITY;
    ratios.push_back(std::isfinite(ratio) ? json(ratio) : json("inf"));
    if (!(ratio >= 1.7 && ratio <= 2.3)) ok = false;
  }
  r.passed = ok;
  r.detail = fmt("errors %.3e .. %.3e", errors.front(), errors.back()) + ", ratios " + ratios.dump();
  r.data = {{"rows", rows}, {"ratios", ratios}};
  r.budget_seconds = 10.0;
  return r;
}

CriterionResult gamma_limit_convergence(const Executor& exec) {
  CriterionResult r;
  r.id = 4;
  r.name = "gamma_limit_convergence";
  const std::array ms{8, 16, 32, 64, 128, 256};
  const auto grid = reciprocal_grid(ms);
  const auto recovery = run_recovery_study(0.0, kAlpha, kBeta, kLambda, grid, SequenceKind::recovery, exec);
  const auto flat = run_recovery_study(0.0, kAlpha, kBeta, kLambda, grid, SequenceKind::flat, exec);
  double flat_dev = 0.0;
  for (double v : flat.values) flat_dev = std::max(flat_dev, std::abs(v - 1.5));
  r.passed = recovery.final_error() <= 1e-2 && std::abs(recovery.limit_ref - 0.625) <= 1e-12 && flat_dev <= 1e-10;
  r.detail = fmt("recovery final error %.3e, flat max deviation from 1.5 %.3e", recovery.final_error(), flat_dev);
  r.data = {{"recovery", to_json(recovery)}, {"flat", to_json(flat)}};
  r.budget_seconds = 120.0;
  return r;
}

// Bits -> [0,1) without relying on library distribution algorithms.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> sorted_breaks(std::mt19937_64& rng, std::size_t count) {
  std::vector<double> b{0.0};
  while (b.size() < count) {
    const double x = 0.02 + 0.96 * unit(rng);
    bool far = true;
    for (double y : b) far = far && std::abs(x - y) > 1e-3;
    if (far) b.push_back(x);
  }
  std::sort(b.begin(), b.end());
  return b;
}

CriterionResult exact_vs_quadrature(const AcceptanceOptions& opts, const Executor& exec) {
  CriterionResult r;
  r.id = 5;
  r.name = "exact_vs_quadrature";
  std::mt19937_64 rng(opts.seed);
  constexpr int instances = 50;
  constexpr int grid = 4096;
  int failures = 0;
  double worst_ratio = 0.0, worst_constant = 0.0;
  json rows = json::array();
  for (int i = 0; i < instances; ++i) {
    const bool constant_kernel = i % 5 == 0;
    const std::size_t segments = 1 + rng() % 4;
    std::vector<double> kv(segments);
    for (double& v : kv) v = 0.5 + 2.5 * unit(rng);
    const PeriodicStepKernel kernel = constant_kernel ? PeriodicStepKernel::constant(kv[0])
                                                      : PeriodicStepKernel(sorted_breaks(rng, segments), kv);

    const std::size_t pieces = 1 + rng() % 6;
    const double z = -1.0 + 2.0 * unit(rng);
    const bool infinite = i % 2 == 0;
    std::vector<double> uv(pieces);
    for (double& v : uv) {
      const auto pick = rng() % 4;
      v = infinite ? z + static_cast<double>(pick % 2) : z + std::array{0.0, 0.5, 1.0, 2.0}[pick];
    }
    const StepFunction u(sorted_breaks(rng, pieces), uv);
    const Potential pot = infinite ? Potential::infinite() : Potential::finite(1.0 + 9.0 * unit(rng));

    // eps = 1/m for most instances; every fourth uses a non-integer 1/eps.
    const int m = 1 + static_cast<int>(rng() % 64);
    const double eps = i % 4 == 3 ? 1.0 / (m + 0.37 * unit(rng) + 0.3) : 1.0 / m;
    const double eps_clamped = std::max(eps, 1.0 / 64.0);

    const auto exact = evaluate(u, pot, kernel, eps_clamped, exec);
    const auto quad = evaluate_quadrature(u, pot, kernel, eps_clamped, grid, exec);
    const double diff = std::abs(exact.value.value() - quad.value.value());
    bool ok = diff <= quad.bound;
    if (constant_kernel) {
      ok = ok && diff <= 1e-9;
      worst_constant = std::max(worst_constant, diff);
    }
    if (quad.bound > 0.0) worst_ratio = std::max(worst_ratio, diff / quad.bound);
    if (!ok) ++failures;
    rows.push_back({{"instance", i}, {"eps", eps_clamped}, {"constant_kernel", constant_kernel},
                    {"potential", to_json(pot)}, {"exact", exact.value.value()}, {"quadrature", quad.value.value()},
                    {"abs_diff", diff}, {"bound", quad.bound}, {"passed", ok}});
  }
  r.passed = failures == 0;
  r.detail = std::to_string(instances - failures) + "/" + std::to_string(instances) +
             fmt(" within bound, worst diff/bound %.3f, constant-kernel max diff %.2e", worst_ratio, worst_constant);
  r.data = {{"seed", opts.seed}, {"grid", grid}, {"instances", rows}};
  r.budget_seconds = 120.0;
  return r;
}

CriterionResult step_target_limit(const Executor& exec) {
  CriterionResult r;
  r.id = 6;
  r.name = "step_target_limit";
  const std::array ms{8, 16, 32, 64, 128, 256};
  const auto grid = reciprocal_grid(ms);
  bool ok = true;
  json studies = json::object();
  std::string detail;
  for (auto [s, expected] : {std::pair{0.25, 0.9375}, std::pair{0.5, 0.75}}) {
    const auto study = run_step_study(s, kAlpha, kBeta, kLambda, grid, exec);
    ok = ok && std::abs(study.limit_ref - expected) <= 1e-12 && study.final_error() <= 1e-2;
    studies[fmt("%g", s)] = to_json(study);
    detail += fmt("s=%g error %.3e; ", s, study.final_error());
  }
  detail.resize(detail.size() - 2);
  r.passed = ok;
  r.detail = detail;
  r.data = studies;
  r.budget_seconds = 120.0;
  return r;
}

CriterionResult non_representability(const Executor& exec) {
  CriterionResult r;
  r.id = 7;
  r.name = "non_representability";
  const auto cert = non_representability_certificate(kAlpha, kBeta, kLambda, 0.5, 0.25, 1e-3, {}, exec);
  const auto& p = std::get<NonRepresentabilityPayload>(cert.payload);
  r.passed = cert.verdict == Verdict::confirmed && exit_code(cert.verdict) == 0 &&
             std::abs(p.g1_s1 - 0.875) <= 1e-12 && std::abs(p.g1_s2 - 35.0 / 24.0) <= 1e-12 &&
             std::abs(p.difference - 7.0 / 12.0) <= 1e-12 && p.constant_reproduced && p.steps_reproduced;
  r.detail = std::string("verdict ") + std::string(to_string(cert.verdict)) +
             fmt(", g(1) %.6f vs %.6f", p.g1_s1, p.g1_s2) + fmt(", difference %.6f", p.difference);
  r.data = to_json(cert);
  r.budget_seconds = 120.0;
  return r;
}

CriterionResult fM_threshold(const Executor& exec) {
  CriterionResult r;
  r.id = 8;
  r.name = "fM_threshold";
  const double eps = 1.0 / 32.0;
  const std::array<double, 6> M_grid{1, 2, 4, 8, 16, 32};
  const auto deviations = default_deviation_profiles(eps, kAlpha, kBeta);
  const auto cert = fM_threshold_experiment(kAlpha, kBeta, kLambda, eps, M_grid, deviations, exec);
  const auto& p = std::get<FmThresholdPayload>(cert.payload);
  r.passed = cert.verdict == Verdict::confirmed;
  r.detail = std::string("verdict ") + std::string(to_string(cert.verdict)) +
             (p.threshold_M ? fmt(", threshold M=%g", *p.threshold_M) : std::string(", no threshold")) +
             fmt(", admissible max diff %.2e", p.admissible_max_diff);
  r.data = to_json(cert);
  r.budget_seconds = 60.0;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts, const Executor& exec) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = closed_form_consistency(); break;
    case 2: r = discrete_rearrangement(exec); break;
    case 3: r = discrete_to_continuum(exec); break;
    case 4: r = gamma_limit_convergence(exec); break;
    case 5: r = exact_vs_quadrature(opts, exec); break;
    case 6: r = step_target_limit(exec); break;
    case 7: r = non_representability(exec); break;
    case 8: r = fM_threshold(exec); break;
    default: throw std::out_of_range("acceptance: criterion id must be 1..8");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, const Executor& exec) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 8; ++id) out.push_back(run_criterion(id, opts, exec));
  return out;
}

nlohmann::json acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts) {
  json criteria = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    criteria.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"data", r.data}});
  }
  return json{{"schema_version", kSchemaVersion}, {"seed", opts.seed}, {"all_passed", all}, {"criteria", criteria}};
}

std::string format_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.2f s)", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail + buf;
}

}  // namespace homog
