#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "homog/states.hpp"

using namespace homog;

TEST_CASE("step function basics") {
  const StepFunction u({0.0, 0.25, 0.5}, {1.0, 3.0, 2.0});
  CHECK(u.eval(0.0) == 1.0);
  CHECK(u.eval(0.25) == 3.0);
  CHECK(u.eval(0.9) == 2.0);
  CHECK(u.ess_inf() == 1.0);
  CHECK(u.ess_sup() == 3.0);
  CHECK(integrate(u) == doctest::Approx(0.25 + 0.75 + 1.0));
  CHECK(StepFunction({0.0, 0.5}, {1.0, 1.0}).simplified() == StepFunction::constant(1.0));
  CHECK_THROWS_AS(StepFunction({0.2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({0.0, 0.6, 0.4}, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("jump function") {
  const auto u = jump_function(0.25);
  CHECK(u.eval(0.1) == 1.0);
  CHECK(u.eval(0.3) == 0.0);
  CHECK(integrate(u) == doctest::Approx(0.25));
}

TEST_CASE("triple-well potentials") {
  const auto f = Potential::infinite();
  CHECK(eval_potential(f, 0.0) == ExtendedReal(1.0));
  CHECK(eval_potential(f, 1.0) == ExtendedReal(0.0));
  CHECK(eval_potential(f, -1.0) == ExtendedReal(0.0));
  CHECK(eval_potential(f, 1.0 + 1e-13) == ExtendedReal(0.0));
  CHECK(eval_potential(f, 0.5).is_infinite());
  CHECK(eval_potential(f, 2.0).is_infinite());
  const auto fM = Potential::finite(7.0);
  CHECK(eval_potential(fM, 0.5) == ExtendedReal(7.0));
  CHECK(eval_potential(fM, -1.0) == ExtendedReal(0.0));
  CHECK_THROWS_AS(Potential::finite(0.0), std::domain_error);
}

TEST_CASE("decompose and reconstruct") {
  const StepFunction u({0.0, 0.3, 0.6}, {-0.5, 0.5, -0.5});
  const auto d = decompose(u);
  const auto* ok = std::get_if<AdmissibleDecomposition>(&d);
  REQUIRE(ok != nullptr);
  CHECK(ok->z == -0.5);
  CHECK(ok->chi.eval(0.4) == 1.0);
  CHECK(reconstruct(*ok) == u);

  const auto bad = decompose(StepFunction({0.0, 0.5}, {0.0, 0.5}));
  const auto* na = std::get_if<NotAdmissible>(&bad);
  REQUIRE(na != nullptr);
  CHECK(na->gap() == doctest::Approx(0.5));

  const auto c = decompose(StepFunction::constant(0.3));
  CHECK(std::get<AdmissibleDecomposition>(c).z == 0.3);
}

TEST_CASE("admissible interval") {
  const auto I = admissible_interval(jump_function(0.25));
  CHECK(I.iota == doctest::Approx(0.25));
  CHECK(I.sigma == doctest::Approx(0.25));
  CHECK_FALSE(I.empty);
  CHECK(admissible_interval(StepFunction({0.0, 0.5}, {0.0, 2.0})).empty);
}

TEST_CASE("oscillating profiles") {
  const std::array arcs{Arc{0.0, 0.25}, Arc{0.75, 1.0}};
  const auto phi = indicator_of_arcs(arcs);
  CHECK(phi.integral() == doctest::Approx(0.5));
  const auto u = oscillating_profile(0.0, arcs, 1.0 / 8.0);
  CHECK(integrate(u) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u.interval_count() == 17);
  CHECK(u.eval(0.01) == 1.0);
  CHECK(u.eval(1.0 / 16.0) == 0.0);
  CHECK_THROWS_AS(oscillating_profile(0.0, arcs, 1e-4, 100), ResourceError);
  CHECK_THROWS_AS(oscillating_profile(0.0, arcs, 0.0), std::domain_error);
  const std::array overlap{Arc{0.0, 0.5}, Arc{0.4, 0.6}};
  CHECK_THROWS_AS(indicator_of_arcs(overlap), std::invalid_argument);
}
