#include "homog/gammalab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace homog {

namespace {

constexpr double kExactFloor = 1e-13;

void check_params(double alpha, double beta, double lambda) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("alpha and beta must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("lambda must lie in (0, 1)");
}

void check_jump(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("jump point s must lie in (0, 1)");
}

double abar_of(double alpha, double beta, double lambda) { return lambda * alpha + (1.0 - lambda) * beta; }

void check_grid(std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw std::invalid_argument("eps grid is empty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0 && eps_grid[i] <= 1.0)) throw std::domain_error("eps values must lie in (0, 1]");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw std::invalid_argument("eps grid must be strictly decreasing");
  }
}

bool whole_periods(double eps) {
  const double m = 1.0 / eps;
  return std::abs(m - std::round(m)) <= 1e-9 * m;
}

std::string format_eps(double eps) {
  std::ostringstream os;
  os.precision(17);
  os << eps;
  return os.str();
}

void finish_study(ConvergenceStudy& study) {
  for (double eps : study.eps_grid)
    if (!whole_periods(eps))
      study.notes.push_back("eps=" + format_eps(eps) + ": 1/eps is not an integer; boundary layers of size O(eps)");

  std::vector<double> xs, ys;
  for (std::size_t i = study.eps_grid.size() / 2; i < study.eps_grid.size(); ++i) {
    const double err = std::abs(study.values[i] - study.limit_ref);
    if (err > kExactFloor) {
      xs.push_back(study.eps_grid[i]);
      ys.push_back(err);
    }
  }
  if (xs.size() >= 2) {
    const auto fit = fit_power_law(xs, ys);
    study.fitted_rate = fit.rate;
    study.fitted_constant = fit.constant;
  } else {
    study.notes.push_back("errors on the second half of the grid are at rounding level; no rate fitted");
  }
  if (!study.envelope_ok()) study.notes.push_back("final error exceeds twice the initial error");
}

std::vector<double> default_study_grid() {
  std::vector<double> g;
  for (int m = 8; m <= 256; m *= 2) g.push_back(1.0 / m);
  return g;
}

}  // namespace

double gamma_limit_constant_value(double alpha, double beta, double lambda) {
  check_params(alpha, beta, lambda);
  const double q = (1.0 - lambda) * (1.0 - lambda);
  return ((1.0 - q) * alpha + q * beta) / 2.0;
}

ExtendedReal homogenized_F(const StepFunction& u, double alpha, double beta, double lambda) {
  check_params(alpha, beta, lambda);
  const auto I = admissible_interval(u);
  if (I.empty) return ExtendedReal::infinity();
  const double lo = std::clamp(I.iota, 0.0, 1.0);
  const double hi = std::clamp(I.sigma, lo, 1.0);
  const double abar = abar_of(alpha, beta, lambda);
  // gamma is piecewise quadratic; its minimum over [lo, hi] sits at an end
  // point, a branch point, or a branch vertex.
  const double candidates[] = {lo,  hi, lambda / 2.0, 1.0 - lambda / 2.0, 0.5, abar / (2.0 * alpha),
                               1.0 - abar / (2.0 * alpha)};
  double best = std::numeric_limits<double>::infinity();
  for (double t : candidates)
    if (t >= lo && t <= hi) best = std::min(best, gamma_closed_form(alpha, beta, lambda, t));
  return best;
}

double step_limit_value(double s, double alpha, double beta, double lambda) {
  check_jump(s);
  check_params(alpha, beta, lambda);
  return abar_of(alpha, beta, lambda) * (s * s + (1.0 - s) * (1.0 - s));
}

double implied_g1(double s, double alpha, double beta, double lambda) {
  check_jump(s);
  check_params(alpha, beta, lambda);
  const double ratio = (s * s + (1.0 - s) * (1.0 - s)) / (2.0 * s * (1.0 - s));
  return ratio * (lambda * lambda * alpha + (1.0 - lambda * lambda) * beta) / 2.0;
}

double implied_g1_from_limits(double s, double abar, double g0) {
  check_jump(s);
  return (s * s + (1.0 - s) * (1.0 - s)) * (abar - g0) / (2.0 * s * (1.0 - s));
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 paired points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::domain_error("fit_power_law: data must be positive");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - my);
  }
  if (sxx == 0.0) throw std::domain_error("fit_power_law: x values are all equal");
  const double rate = sxy / sxx;
  return {rate, std::exp(my - rate * mx), xs.size()};
}

double ConvergenceStudy::final_error() const {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(values.back() - limit_ref);
}

bool ConvergenceStudy::envelope_ok() const {
  if (values.empty()) return true;
  const double first = std::abs(values.front() - limit_ref);
  return final_error() <= 2.0 * first + kExactFloor;
}

ConvergenceStudy run_recovery_study(double c, double alpha, double beta, double lambda,
                                    std::span<const double> eps_grid, SequenceKind kind, const Executor& exec) {
  check_params(alpha, beta, lambda);
  check_grid(eps_grid);
  const auto k = make_lambda_kernel(alpha, beta, lambda);
  const auto arcs = optimal_profile(0.5, orientation_for(alpha, beta));

  ConvergenceStudy study;
  study.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  study.limit_ref = gamma_limit_constant_value(alpha, beta, lambda);
  for (double eps : eps_grid) {
    const StepFunction u = kind == SequenceKind::recovery ? oscillating_profile(c - 0.5, arcs, eps)
                                                          : StepFunction::constant(c);
    study.values.push_back(evaluate(u, Potential::infinite(), k, eps, exec).value.value());
  }
  if (kind == SequenceKind::recovery) {
    for (std::size_t i = 0; i < study.values.size(); ++i)
      if (study.values[i] < study.limit_ref - 1e-9 && whole_periods(study.eps_grid[i]))
        study.notes.push_back("eps=" + format_eps(study.eps_grid[i]) + ": value below the limit");
  } else {
    study.notes.push_back("flat sequence u = c; converges to abar, not to the limit");
  }
  finish_study(study);
  return study;
}

ConvergenceStudy run_step_study(double s, double alpha, double beta, double lambda,
                                std::span<const double> eps_grid, const Executor& exec) {
  check_grid(eps_grid);
  const auto k = make_lambda_kernel(alpha, beta, lambda);
  const auto u = jump_function(s);
  ConvergenceStudy study;
  study.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  study.limit_ref = step_limit_value(s, alpha, beta, lambda);
  for (double eps : eps_grid)
    study.values.push_back(evaluate(u, Potential::infinite(), k, eps, exec).value.value());
  finish_study(study);
  return study;
}

std::vector<double> reciprocal_grid(std::span<const int> ms) {
  std::vector<double> g;
  for (int m : ms) {
    if (m <= 0) throw std::domain_error("reciprocal_grid: m must be positive");
    g.push_back(1.0 / m);
  }
  return g;
}

double two_scale_pairing(const StepFunction& chi, const StepFunction& psi1, const PeriodicStepFunction& psi2,
                         double eps) {
  if (!(eps > 0.0)) throw std::domain_error("two_scale_pairing: eps must be > 0");
  for (double v : chi.values())
    if (v != 0.0 && v != 1.0) throw std::invalid_argument("two_scale_pairing: chi must be {0,1}-valued");

  std::vector<double> cuts(chi.breakpoints().begin(), chi.breakpoints().end());
  cuts.insert(cuts.end(), psi1.breakpoints().begin(), psi1.breakpoints().end());
  const auto pb = psi2.breakpoints();
  for (std::size_t p = 0;; ++p) {
    bool done = false;
    for (double b : pb) {
      const double x = (static_cast<double>(p) + b) * eps;
      if (x >= 1.0) {
        done = true;
        break;
      }
      cuts.push_back(x);
    }
    if (done) break;
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const double mid = cuts[i] + 0.5 * len;
    const double c = chi.eval(mid);
    if (c == 0.0) continue;
    total.add(psi1.eval(mid) * psi2.eval(mid / eps) * len);
  }
  return total.value();
}

double two_scale_limit(const StepFunction& psi1, const PeriodicStepFunction& phi, const PeriodicStepFunction& psi2) {
  std::vector<double> cuts(phi.breakpoints().begin(), phi.breakpoints().end());
  cuts.insert(cuts.end(), psi2.breakpoints().begin(), psi2.breakpoints().end());
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double cell = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    cell += phi.eval(mid) * psi2.eval(mid) * (cuts[i + 1] - cuts[i]);
  }
  return integrate(psi1) * cell;
}

std::vector<TwoScaleRow> two_scale_table(const PeriodicStepFunction& phi, const StepFunction& psi1,
                                         const PeriodicStepFunction& psi2, std::span<const double> eps_grid) {
  const double limit = two_scale_limit(psi1, phi, psi2);
  std::vector<TwoScaleRow> rows;
  for (double eps : eps_grid) {
    const StepFunction chi = oscillate(phi, 0.0, eps);
    const double pairing = two_scale_pairing(chi, psi1, psi2, eps);
    rows.push_back({eps, pairing, limit, std::abs(pairing - limit)});
  }
  return rows;
}

std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::gamma_limit_constant: return "gamma_limit_constant";
    case CertificateKind::step_limit: return "step_limit";
    case CertificateKind::non_representability: return "non_representability";
    case CertificateKind::fM_threshold: return "fM_threshold";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::confirmed: return "confirmed";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::confirmed: return 0;
    case Verdict::refuted: return 2;
    case Verdict::inconclusive: return 3;
  }
  return 3;
}

Certificate study_certificate(CertificateKind kind, ConvergenceStudy study, double tol) {
  Certificate cert;
  cert.kind = kind;
  cert.verdict = study.final_error() <= tol ? Verdict::confirmed : Verdict::refuted;
  cert.tolerances = {{"final_error", tol}};
  cert.payload = StudyPayload{std::move(study)};
  return cert;
}

Certificate non_representability_certificate(double alpha, double beta, double lambda, double s1, double s2,
                                             double tol, const NonRepOptions& opts, const Executor& exec) {
  check_params(alpha, beta, lambda);
  check_jump(s1);
  check_jump(s2);
  if (std::abs(s1 - s2) <= 1e-12) throw std::domain_error("non-representability: s1 and s2 coincide");
  if (std::abs(s1 + s2 - 1.0) <= 1e-12)
    throw std::domain_error("non-representability: s2 == 1 - s1 gives the same g(1) by symmetry");

  const auto grid = opts.eps_grid.empty() ? default_study_grid() : opts.eps_grid;

  NonRepresentabilityPayload p;
  p.s1 = s1;
  p.s2 = s2;
  p.g1_s1 = implied_g1(s1, alpha, beta, lambda);
  p.g1_s2 = implied_g1(s2, alpha, beta, lambda);
  p.difference = std::abs(p.g1_s1 - p.g1_s2);
  p.g0 = gamma_limit_constant_value(alpha, beta, lambda);
  p.abar = abar_of(alpha, beta, lambda);
  p.constant_study = run_recovery_study(0.0, alpha, beta, lambda, grid, SequenceKind::recovery, exec);
  p.step_study_s1 = run_step_study(s1, alpha, beta, lambda, grid, exec);
  p.step_study_s2 = run_step_study(s2, alpha, beta, lambda, grid, exec);
  p.constant_reproduced = p.constant_study.final_error() <= opts.limit_tol;
  p.steps_reproduced =
      p.step_study_s1.final_error() <= opts.limit_tol && p.step_study_s2.final_error() <= opts.limit_tol;

  Certificate cert;
  cert.kind = CertificateKind::non_representability;
  cert.tolerances = {{"g1_difference", tol}, {"limit_reproduction", opts.limit_tol}};
  if (!p.constant_reproduced || !p.steps_reproduced) {
    cert.verdict = Verdict::inconclusive;
  } else {
    cert.verdict = p.difference > tol ? Verdict::confirmed : Verdict::refuted;
  }
  cert.payload = std::move(p);
  return cert;
}

std::vector<NamedProfile> default_deviation_profiles(double eps, double alpha, double beta) {
  const double z = -0.5;
  // Cell layout of the recovery profile: the upper phase on the cheap arcs.
  const bool at_zero = orientation_for(alpha, beta) == ProfileOrientation::low_cost_at_zero;
  const double in = at_zero ? 1.0 : 0.0;
  const double out = 1.0 - in;
  auto two_level = [&](double gap) {
    return PeriodicStepFunction({0.0, 0.25, 0.75}, {gap * in, gap * out, gap * in});
  };
  std::vector<NamedProfile> out_profiles;
  out_profiles.push_back(
      {"three_level_half_steps", oscillate(PeriodicStepFunction({0.0, 1.0 / 3.0, 2.0 / 3.0}, {0.0, 0.5, 1.0}), z, eps)});
  out_profiles.push_back({"two_level_gap_half", oscillate(two_level(0.5), z, eps)});
  out_profiles.push_back({"two_level_gap_two", oscillate(two_level(2.0), z, eps)});
  // Middle level on the recovery profile's upper phase, the other phase split
  // between the levels below and above it.
  auto unit_steps = at_zero ? PeriodicStepFunction({0.0, 0.25, 0.5, 0.75}, {1.0, 0.0, 2.0, 1.0})
                            : PeriodicStepFunction({0.0, 0.25, 0.75}, {0.0, 1.0, 2.0});
  out_profiles.push_back({"three_level_unit_steps", oscillate(unit_steps, z, eps)});
  return out_profiles;
}

Certificate fM_threshold_experiment(double alpha, double beta, double lambda, double eps,
                                    std::span<const double> M_grid, std::span<const NamedProfile> deviations,
                                    const Executor& exec) {
  check_params(alpha, beta, lambda);
  if (M_grid.empty()) throw std::invalid_argument("fM experiment: empty M grid");
  const auto k = make_lambda_kernel(alpha, beta, lambda);
  const auto arcs = optimal_profile(0.5, orientation_for(alpha, beta));
  const StepFunction optimum_profile = oscillating_profile(-0.5, arcs, eps);

  FmThresholdPayload p;
  p.eps = eps;
  p.M_grid.assign(M_grid.begin(), M_grid.end());
  p.optimum = evaluate(optimum_profile, Potential::infinite(), k, eps, exec).value.value();
  for (const auto& d : deviations) p.deviation_names.push_back(d.name);

  const std::vector<NamedProfile> admissible{
      {"recovery_profile", optimum_profile}, {"constant", StepFunction::constant(0.0)}, {"jump_half", jump_function(0.5)}};
  for (const auto& a : admissible) p.admissible_names.push_back(a.name);

  constexpr double kStrictMargin = 1e-12;
  for (double M : M_grid) {
    const auto potential = Potential::finite(M);
    std::vector<double> row;
    bool all_worse = true;
    for (const auto& d : deviations) {
      const double v = evaluate(d.u, potential, k, eps, exec).value.value();
      row.push_back(v);
      if (!(v > p.optimum + kStrictMargin)) all_worse = false;
    }
    p.deviation_values.push_back(std::move(row));
    p.all_strictly_worse.push_back(all_worse);
    for (const auto& a : admissible) {
      const double finite = evaluate(a.u, potential, k, eps, exec).value.value();
      const double infinite = evaluate(a.u, Potential::infinite(), k, eps, exec).value.value();
      p.admissible_max_diff = std::max(p.admissible_max_diff, std::abs(finite - infinite));
    }
  }
  // Smallest M from which every larger M in the grid also works.
  std::vector<std::size_t> order(M_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return M_grid[a] < M_grid[b]; });
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (!p.all_strictly_worse[*it]) break;
    p.threshold_M = M_grid[*it];
  }

  Certificate cert;
  cert.kind = CertificateKind::fM_threshold;
  cert.tolerances = {{"strict_margin", kStrictMargin}, {"admissible_agreement", 1e-12}};
  cert.verdict = p.threshold_M && p.admissible_max_diff <= 1e-12 ? Verdict::confirmed : Verdict::inconclusive;
  cert.payload = std::move(p);
  return cert;
}

}  // namespace homog
