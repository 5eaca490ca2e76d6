#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "homog/cell.hpp"
#include "homog/energy.hpp"
#include "homog/extended_real.hpp"
#include "homog/kernel.hpp"
#include "homog/parallel.hpp"
#include "homog/states.hpp"

namespace homog {

/// Limit of F_eps on constants: ((1 - (1-l)^2) alpha + (1-l)^2 beta) / 2.
double gamma_limit_constant_value(double alpha, double beta, double lambda);

/// Candidate homogenised functional: min of gamma over [iota(u), sigma(u)],
/// +inf when that interval is empty. Minimised analytically over the
/// piecewise-quadratic branches.
ExtendedReal homogenized_F(const StepFunction& u, double alpha, double beta, double lambda);

/// abar (s^2 + (1-s)^2), the limit on the single-jump target u_s.
double step_limit_value(double s, double alpha, double beta, double lambda);

/// g(1) forced on a hypothetical integrand g by the constant and u_s limits:
/// (s^2 + (1-s)^2) / (2 s (1-s)) * (l^2 alpha + (1 - l^2) beta) / 2.
double implied_g1(double s, double alpha, double beta, double lambda);

/// Same quantity from the two limit values: (s^2 + (1-s)^2) (abar - g0) / (2 s (1-s)).
double implied_g1_from_limits(double s, double abar, double g0);

// ---------------------------------------------------------------------------
// Convergence studies

struct PowerLawFit {
  double rate = 0.0;
  double constant = 0.0;
  std::size_t points = 0;
};

/// Least squares of log y = log C + rate log x. Requires >= 2 points with
/// positive x and y.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

struct ConvergenceStudy {
  std::vector<double> eps_grid;
  std::vector<double> values;
  double limit_ref = 0.0;
  std::optional<double> fitted_rate;
  std::optional<double> fitted_constant;
  std::vector<std::string> notes;

  double final_error() const;
  /// |last error| <= 2 |first error| (plus rounding slack).
  bool envelope_ok() const;
};

enum class SequenceKind { recovery, flat };

/// F_eps along c - 1/2 + phi_{1/2}(x/eps) (recovery) or the flat u = c,
/// against the constant-target limit. Errors below 1e-13 are treated as
/// exact and excluded from the rate fit, which uses the last half of the grid.
ConvergenceStudy run_recovery_study(double c, double alpha, double beta, double lambda,
                                    std::span<const double> eps_grid, SequenceKind kind = SequenceKind::recovery,
                                    const Executor& exec = Executor{});

/// F_eps along the constant sequence u_s against step_limit_value(s).
ConvergenceStudy run_step_study(double s, double alpha, double beta, double lambda,
                                std::span<const double> eps_grid, const Executor& exec = Executor{});

/// eps = 1/m for each m.
std::vector<double> reciprocal_grid(std::span<const int> ms);

// ---------------------------------------------------------------------------
// Two-scale pairing

/// int_0^1 chi(x) psi1(x) psi2(x/eps) dx, exactly. chi must be {0,1}-valued.
double two_scale_pairing(const StepFunction& chi, const StepFunction& psi1, const PeriodicStepFunction& psi2,
                         double eps);

/// (int psi1) * int_Y phi psi2 for a cell profile phi.
double two_scale_limit(const StepFunction& psi1, const PeriodicStepFunction& phi, const PeriodicStepFunction& psi2);

struct TwoScaleRow {
  double eps = 0.0;
  double pairing = 0.0;
  double limit = 0.0;
  double abs_error = 0.0;
};

/// Pairing of chi_eps = phi(x/eps) against psi1(x) psi2(x/eps) along the grid.
std::vector<TwoScaleRow> two_scale_table(const PeriodicStepFunction& phi, const StepFunction& psi1,
                                         const PeriodicStepFunction& psi2, std::span<const double> eps_grid);

// ---------------------------------------------------------------------------
// Certificates

enum class CertificateKind { gamma_limit_constant, step_limit, non_representability, fM_threshold };
enum class Verdict { confirmed, refuted, inconclusive };

std::string_view to_string(CertificateKind k);
std::string_view to_string(Verdict v);
/// 0 confirmed, 2 refuted, 3 inconclusive.
int exit_code(Verdict v);

struct StudyPayload {
  ConvergenceStudy study;
};

struct NonRepresentabilityPayload {
  double s1 = 0.0;
  double s2 = 0.0;
  double g1_s1 = 0.0;
  double g1_s2 = 0.0;
  double difference = 0.0;
  double g0 = 0.0;
  double abar = 0.0;
  ConvergenceStudy constant_study;
  ConvergenceStudy step_study_s1;
  ConvergenceStudy step_study_s2;
  bool constant_reproduced = false;
  bool steps_reproduced = false;
};

struct NamedProfile {
  std::string name;
  StepFunction u;
};

struct FmThresholdPayload {
  double eps = 0.0;
  std::vector<double> M_grid;
  double optimum = 0.0;
  std::vector<std::string> deviation_names;
  std::vector<std::vector<double>> deviation_values;  // [M index][profile index]
  std::vector<bool> all_strictly_worse;                // per M
  std::optional<double> threshold_M;
  std::vector<std::string> admissible_names;
  double admissible_max_diff = 0.0;
};

struct Certificate {
  CertificateKind kind = CertificateKind::gamma_limit_constant;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<std::string, double>> tolerances;
  std::variant<StudyPayload, NonRepresentabilityPayload, FmThresholdPayload> payload;
};

/// Confirmed when the study's final error is within tol.
Certificate study_certificate(CertificateKind kind, ConvergenceStudy study, double tol);

struct NonRepOptions {
  std::vector<double> eps_grid;  // empty selects 1/8, 1/16, ..., 1/256
  double limit_tol = 1e-2;
};

/// Compares implied_g1 at two jump points and reproduces both constituent
/// limits at finite eps. Throws std::domain_error for s outside (0, 1) and for
/// degenerate pairs (s1 == s2 or s1 + s2 == 1).
Certificate non_representability_certificate(double alpha, double beta, double lambda, double s1, double s2,
                                             double tol, const NonRepOptions& opts = {},
                                             const Executor& exec = Executor{});

/// Default deviation family at scale eps, each oscillating like the recovery
/// sequence: three levels {z, z+1/2, z+1} in thirds, two levels with gap 1/2,
/// two levels with gap 2, and three integer levels {z, z+1, z+2} that keeps
/// the optimal unit jumps and splits the lower phase.
std::vector<NamedProfile> default_deviation_profiles(double eps, double alpha, double beta);

/// For each M, compares every deviation profile under f_M with the
/// admissible optimum c - 1/2 + phi_{1/2}(x/eps), and checks that admissible
/// profiles score the same under f and f_M.
Certificate fM_threshold_experiment(double alpha, double beta, double lambda, double eps,
                                    std::span<const double> M_grid, std::span<const NamedProfile> deviations,
                                    const Executor& exec = Executor{});

}  // namespace homog
