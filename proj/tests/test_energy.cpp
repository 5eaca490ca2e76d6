#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "homog/energy.hpp"
#include "oracles.hpp"

using namespace homog;

namespace {

std::vector<double> random_breaks(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<double> b{0.0};
  while (b.size() < count) b.push_back(u(rng));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace

TEST_CASE("rectangle integral matches the kink-trapezoid oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PeriodicStepKernel a({0.0, 0.2, 0.55}, {1.5, 0.7, 2.2});
  const oracle::Kernel o{{0.0, 0.2, 0.55}, {1.5, 0.7, 2.2}};
  for (int i = 0; i < 100; ++i) {
    double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    if (x1 - x0 < 1e-6 || y1 - y0 < 1e-6) continue;
    const double eps = std::array{1.0, 0.3, 1.0 / 16.0, 0.0137}[i % 4];
    CHECK(rect_integral(a, eps, x0, x1, y0, y1) ==
          doctest::Approx(oracle::rect(o, eps, x0, x1, y0, y1)).epsilon(1e-10));
  }
}

TEST_CASE("rectangle integral edge cases") {
  const auto c = PeriodicStepKernel::constant(3.0);
  CHECK(rect_integral(c, 0.01, 0.1, 0.4, 0.2, 0.7) == doctest::Approx(3.0 * 0.3 * 0.5).epsilon(1e-14));
  const auto a = make_lambda_kernel(1, 2, 0.5);
  CHECK_THROWS_AS(rect_integral(a, 0.1, 0.5, 0.5, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(rect_integral(a, 0.0, 0.0, 1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(rect_integral(a, 1e-13, 0.0, 1.0, 0.0, 1.0), std::range_error);
}

TEST_CASE("exact energy matches the oracle on random step functions") {
  std::mt19937_64 rng(5);
  const PeriodicStepKernel a({0.0, 0.3, 0.7}, {1.0, 2.5, 1.7});
  const oracle::Kernel o{{0.0, 0.3, 0.7}, {1.0, 2.5, 1.7}};
  for (int i = 0; i < 20; ++i) {
    const auto b = random_breaks(rng, 2 + i % 5);
    std::vector<double> v;
    for (std::size_t j = 0; j < b.size(); ++j) v.push_back(std::array{0.2, 1.2, 0.7, 3.2}[rng() % 4]);
    const double eps = 1.0 / (3 + i);
    const double M = 4.0;
    const auto r = evaluate(StepFunction(b, v), Potential::finite(M), a, eps);
    CHECK(r.value.value() == doctest::Approx(oracle::energy(b, v, o, eps, M)).epsilon(1e-10));
    CHECK(r.method == EnergyMethod::exact);
  }
}

TEST_CASE("infinite well: admissible values finite, others infinite") {
  const auto a = make_lambda_kernel(1, 2, 0.5);
  const StepFunction adm({0.0, 0.4}, {0.3, 1.3});
  CHECK(evaluate(adm, Potential::infinite(), a, 0.1).value.is_finite());
  const StepFunction bad({0.0, 0.4}, {0.3, 0.8});
  CHECK(evaluate(bad, Potential::infinite(), a, 0.1).value.is_infinite());
  CHECK(evaluate(bad, Potential::finite(5.0), a, 0.1).value.is_finite());
}

TEST_CASE("energy is invariant under adding a constant") {
  const auto a = make_lambda_kernel(1, 3, 0.4);
  const StepFunction u({0.0, 0.2, 0.65}, {0.0, 1.0, 0.0});
  const double e0 = evaluate(u, Potential::infinite(), a, 1.0 / 7.0).value.value();
  const double e1 = evaluate(u.shifted(-0.37), Potential::infinite(), a, 1.0 / 7.0).value.value();
  CHECK(e0 == doctest::Approx(e1).epsilon(1e-14));
}

TEST_CASE("constant state has energy abar at eps = 1/m") {
  const auto a = make_lambda_kernel(1, 2, 0.5);
  for (int m : {1, 3, 8, 64})
    CHECK(evaluate(StepFunction::constant(0.0), Potential::infinite(), a, 1.0 / m).value.value() ==
          doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("thread count does not change the bits") {
  const auto a = make_lambda_kernel(1, 2, 0.5);
  const std::array arcs{Arc{0.0, 0.25}, Arc{0.75, 1.0}};
  const auto u = oscillating_profile(0.0, arcs, 1.0 / 40.0);
  const double e1 = evaluate(u, Potential::infinite(), a, 1.0 / 40.0, Executor(1)).value.value();
  const double e4 = evaluate(u, Potential::infinite(), a, 1.0 / 40.0, Executor(4)).value.value();
  const double e7 = evaluate(u, Potential::infinite(), a, 1.0 / 40.0, Executor(7)).value.value();
  CHECK(e1 == e4);
  CHECK(e1 == e7);
}

TEST_CASE("quadrature oracle lies within its bound") {
  std::mt19937_64 rng(3);
  const PeriodicStepKernel a({0.0, 0.4}, {1.0, 2.0});
  for (int i = 0; i < 6; ++i) {
    const auto b = random_breaks(rng, 3);
    std::vector<double> v(b.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = (j % 2) * 1.0;
    const StepFunction w(b, v);
    const double eps = 1.0 / (5 + 3 * i);
    const auto exact = evaluate(w, Potential::finite(3.0), a, eps);
    const auto quad = evaluate_quadrature(w, Potential::finite(3.0), a, eps, 1024);
    CHECK(quad.method == EnergyMethod::quadrature);
    CHECK(std::abs(exact.value.value() - quad.value.value()) <= quad.bound);
  }
  CHECK_THROWS(evaluate_quadrature(StepFunction::constant(0.0), Potential::infinite(), a, 0.1, 1));
}
