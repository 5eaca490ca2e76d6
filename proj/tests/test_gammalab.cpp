#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "homog/gammalab.hpp"
#include "oracles.hpp"

using namespace homog;

namespace {

double r_of(double s) { return (s * s + (1 - s) * (1 - s)) / (2 * s * (1 - s)); }

}  // namespace

TEST_CASE("limit value for constants") {
  CHECK(gamma_limit_constant_value(1, 2, 0.5) == doctest::Approx(0.625).epsilon(1e-15));
  for (auto [alpha, beta, lambda] : {std::array{1.0, 2.0, 0.5}, std::array{1.0, 5.0, 0.1}, std::array{2.0, 3.0, 0.9}}) {
    const double q = (1 - lambda) * (1 - lambda);
    const double expected = ((1 - q) * alpha + q * beta) / 2;
    CHECK(gamma_limit_constant_value(alpha, beta, lambda) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(gamma_limit_constant_value(alpha, beta, lambda) ==
          doctest::Approx(gamma_closed_form(alpha, beta, lambda, 0.5)).epsilon(1e-14));
  }
}

TEST_CASE("step limit and implied g(1)") {
  CHECK(step_limit_value(0.25, 1, 2, 0.5) == doctest::Approx(0.9375));
  CHECK(step_limit_value(0.5, 1, 2, 0.5) == doctest::Approx(0.75));
  CHECK(implied_g1(0.5, 1, 2, 0.5) == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(implied_g1(0.25, 1, 2, 0.5) == doctest::Approx(35.0 / 24.0).epsilon(1e-14));
  for (auto [s1, s2] : {std::pair{0.5, 0.25}, std::pair{0.1, 0.3}, std::pair{0.7, 0.45}}) {
    const double diff = implied_g1(s1, 1, 2, 0.5) - implied_g1(s2, 1, 2, 0.5);
    const double formula = (1.5 - 0.625) * (r_of(s1) - r_of(s2));
    CHECK(std::abs(diff - formula) <= 1e-12);
  }
  double prev = INFINITY;
  for (int i = 1; i <= 50; ++i) {
    const double s = i / 100.0;
    const double g = implied_g1(s, 1, 2, 0.5);
    CHECK(g < prev);
    CHECK(g == doctest::Approx(implied_g1(1 - s, 1, 2, 0.5)).epsilon(1e-12));
    prev = g;
  }
}

TEST_CASE("power-law fit") {
  std::vector<double> x, y;
  for (int m : {8, 16, 32, 64}) {
    x.push_back(1.0 / m);
    y.push_back(3.0 * std::pow(1.0 / m, 1.5));
  }
  const auto fit = fit_power_law(x, y);
  CHECK(fit.rate == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("recovery study values match the oracle energy") {
  const std::array ms{4, 8};
  const auto grid = reciprocal_grid(ms);
  const auto study = run_recovery_study(0.0, 1, 2, 0.5, grid);
  const auto o = oracle::lambda_kernel(1, 2, 0.5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::array arcs{Arc{0.0, 0.25}, Arc{0.75, 1.0}};
    const auto u = oscillating_profile(-0.5, arcs, grid[i]);
    std::vector<double> b(u.breakpoints().begin(), u.breakpoints().end());
    std::vector<double> v(u.values().begin(), u.values().end());
    CHECK(study.values[i] == doctest::Approx(oracle::energy(b, v, o, grid[i], -1.0)).epsilon(1e-11));
  }
  CHECK(study.limit_ref == doctest::Approx(0.625));
  const auto flat = run_recovery_study(0.0, 1, 2, 0.5, grid, SequenceKind::flat);
  for (double v : flat.values) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("non-integer 1/eps is flagged") {
  const std::array<double, 2> grid{1.0 / 8.0, 1.0 / 8.5};
  const auto study = run_recovery_study(0.0, 1, 2, 0.5, grid);
  CHECK_FALSE(study.notes.empty());
}

TEST_CASE("two-scale pairing against midpoint quadrature") {
  const std::array arcs{Arc{0.0, 0.25}, Arc{0.75, 1.0}};
  const auto phi = indicator_of_arcs(arcs);
  const StepFunction psi1({0.0, 0.5}, {1.0, 2.0});
  const auto psi2 = make_lambda_kernel(1, 2, 0.5).profile();
  const double eps = 1.0 / 7.0;
  const auto chi = oscillate(phi, 0.0, eps);
  const int N = 1 << 20;
  double q = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = (i + 0.5) / N;
    q += chi.eval(x) * psi1.eval(x) * psi2.eval(x / eps);
  }
  q /= N;
  CHECK(two_scale_pairing(chi, psi1, psi2, eps) == doctest::Approx(q).epsilon(1e-5));
  // (int psi1) * int_Y phi psi2 = 1.5 * (1/2 * 1) = 0.75
  CHECK(two_scale_limit(psi1, phi, psi2) == doctest::Approx(0.75).epsilon(1e-14));
  const std::array ms{8, 16, 32};
  const auto rows = two_scale_table(phi, psi1, psi2, reciprocal_grid(ms));
  for (const auto& r : rows) CHECK(r.abs_error <= r.eps);
}

TEST_CASE("non-representability certificate") {
  const auto c = non_representability_certificate(1, 2, 0.5, 0.5, 0.25, 1e-3);
  CHECK(c.verdict == Verdict::confirmed);
  CHECK(exit_code(c.verdict) == 0);
  const auto& p = std::get<NonRepresentabilityPayload>(c.payload);
  CHECK(p.difference == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(p.constant_reproduced);
  CHECK(p.steps_reproduced);
  CHECK_THROWS_AS(non_representability_certificate(1, 2, 0.5, 0.3, 0.3, 1e-3), std::domain_error);
  CHECK_THROWS_AS(non_representability_certificate(1, 2, 0.5, 0.3, 0.7, 1e-3), std::domain_error);
  const auto refuted = non_representability_certificate(1, 2, 0.5, 0.5, 0.49, 1e-3);
  CHECK(refuted.verdict == Verdict::refuted);
  CHECK(exit_code(refuted.verdict) == 2);
}

TEST_CASE("f_M experiment") {
  const double eps = 1.0 / 32.0;
  const std::array<double, 6> Ms{1, 2, 4, 8, 16, 32};
  const auto dev = default_deviation_profiles(eps, 1, 2);
  CHECK(dev.size() == 4);
  const auto c = fM_threshold_experiment(1, 2, 0.5, eps, Ms, dev);
  CHECK(c.verdict == Verdict::confirmed);
  const auto& p = std::get<FmThresholdPayload>(c.payload);
  REQUIRE(p.threshold_M.has_value());
  CHECK(*p.threshold_M == 2.0);
  CHECK(p.optimum == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(p.admissible_max_diff <= 1e-12);
  const std::array<double, 1> tiny{0.01};
  CHECK(fM_threshold_experiment(1, 2, 0.5, eps, tiny, dev).verdict == Verdict::inconclusive);
}

TEST_CASE("candidate functional on constants and non-admissible states") {
  CHECK(homogenized_F(StepFunction::constant(0.3), 1, 2, 0.5) == ExtendedReal(0.625));
  CHECK(homogenized_F(StepFunction({0.0, 0.5}, {0.0, 2.5}), 1, 2, 0.5).is_infinite());
}
