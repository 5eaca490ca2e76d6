#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "homog/cell.hpp"
#include "oracles.hpp"

using namespace homog;

TEST_CASE("cell matrix entries are scaled cell-pair integrals") {
  const auto a = make_lambda_kernel(1, 2, 0.3);
  const auto o = oracle::lambda_kernel(1, 2, 0.3);
  const std::size_t n = 10;
  const auto K = build_cell_matrix(a, n);
  double row = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ref = n * n * oracle::rect(o, 1.0, 0.0, 1.0 / n, double(j) / n, double(j + 1) / n);
    CHECK(K.entry(0, j) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(K.entry(3, j) == K.entry(j, 3));
    row += K.entry(0, j);
  }
  CHECK(row == doctest::Approx(n * o.mean()).epsilon(1e-13));
}

TEST_CASE("closed-form gamma equals the boundary-arc energy") {
  for (auto [alpha, beta, lambda] : {std::array{1.0, 2.0, 0.5}, std::array{1.0, 3.0, 0.2},
                                     std::array{2.0, 1.0, 0.5}, std::array{0.5, 4.0, 0.8}}) {
    const auto o = oracle::lambda_kernel(alpha, beta, lambda);
    for (int i = 0; i <= 20; ++i) {
      const double t = i / 20.0;
      std::vector<oracle::Interval> E;
      if (t > 0.0) E = {{0.0, t / 2.0}, {1.0 - t / 2.0, 1.0}};
      if (t == 1.0) E = {{0.0, 1.0}};
      CHECK(gamma_closed_form(alpha, beta, lambda, t) == doctest::Approx(oracle::set_energy(o, E)).epsilon(1e-12));
    }
  }
  CHECK(gamma_closed_form(1, 2, 0.5, 0.5) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(gamma_closed_form(1, 2, 0.5, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_closed_form(1, 2, 0.5, 1.5), std::domain_error);
}

TEST_CASE("optimal profile orientation") {
  const auto zero = optimal_profile(0.4, ProfileOrientation::low_cost_at_zero);
  REQUIRE(zero.size() == 2);
  CHECK(zero[0] == Arc{0.0, 0.2});
  CHECK(zero[1].begin == doctest::Approx(0.8));
  const auto half = optimal_profile(0.4, ProfileOrientation::low_cost_at_half);
  REQUIRE(half.size() == 1);
  CHECK(half[0].begin == doctest::Approx(0.3));
  CHECK(orientation_for(1, 2) == ProfileOrientation::low_cost_at_zero);
  CHECK(orientation_for(2, 1) == ProfileOrientation::low_cost_at_half);
}

TEST_CASE("cell energy of an aligned discretization equals gamma") {
  const auto a = make_lambda_kernel(1, 2, 0.5);
  for (double t : {0.25, 0.5, 0.75}) {
    const auto K = build_cell_matrix(a, 64);
    const auto phi = discretize(optimal_profile(t, ProfileOrientation::low_cost_at_zero), 64);
    CHECK(phi.mean() == doctest::Approx(t));
    CHECK(cell_energy(K, phi) == doctest::Approx(gamma_closed_form(1, 2, 0.5, t)).epsilon(1e-12));
  }
}

TEST_CASE("discrete cell energy approaches gamma at a misaligned t") {
  const auto a = make_lambda_kernel(1, 2, 0.5);
  const double t = 0.3;
  const double g = gamma_closed_form(1, 2, 0.5, t);
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto K = build_cell_matrix(a, n);
    const double e = cell_energy(K, discretize(optimal_profile(t, ProfileOrientation::low_cost_at_zero), n));
    CHECK(std::abs(e - g) <= 2.0 / n);
  }
}

TEST_CASE("direct and FFT products agree") {
  const auto a = make_lambda_kernel(1, 2, 0.37);
  const std::size_t n = 1024;
  const auto K = build_cell_matrix(a, n);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> phi(n);
  for (double& x : phi) x = u(rng);
  const auto d = apply_cell_matrix(K, phi, MatVecPath::direct);
  const auto f = apply_cell_matrix(K, phi, MatVecPath::fft);
  for (std::size_t i = 0; i < n; i += 37) CHECK(f[i] == doctest::Approx(d[i]).epsilon(1e-11));
}

TEST_CASE("box-mean projection matches bisection") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.5, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(25);
    for (double& x : v) x = g(rng);
    const double t = 0.1 + 0.08 * trial;
    const auto p = project_box_mean(v, t);
    const auto ref = oracle::project(v, t);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(p.point[i] == doctest::Approx(ref[i]).epsilon(1e-9));
  }
}

TEST_CASE("relaxed solver respects the constraint and does not lose to the arc profile") {
  const auto a = make_lambda_kernel(1, 2, 0.5);
  const std::size_t n = 64;
  const auto K = build_cell_matrix(a, n);
  for (double t : {0.2, 0.5}) {
    const auto r = solve_relaxed(K, t);
    CHECK(r.constraint_residual <= 1e-10);
    CHECK(r.profile.mean() == doctest::Approx(t).epsilon(1e-10));
    CHECK(r.energy == doctest::Approx(cell_energy(K, r.profile)).epsilon(1e-12));
    const auto arc = discretize(optimal_profile(t, ProfileOrientation::low_cost_at_zero), n);
    CHECK(r.energy <= cell_energy(K, arc) + 1e-12);
  }
}

TEST_CASE("exhaustive search agrees with a direct enumeration") {
  const auto a = make_lambda_kernel(1, 2, 0.25);
  const std::size_t n = 10, k = 4;
  const auto K = build_cell_matrix(a, n);
  double best = INFINITY;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != static_cast<int>(k)) continue;
    double same = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (((mask >> i) & 1u) == ((mask >> j) & 1u)) same += K.entry(i, j);
    best = std::min(best, same / (n * n));
  }
  const auto all = solve_brute_force(K, k, BruteForceMode::all_subsets);
  const auto arcs = solve_brute_force(K, k, BruteForceMode::arcs_only);
  CHECK(all.energy == doctest::Approx(best).epsilon(1e-13));
  CHECK(arcs.energy >= all.energy - 1e-13);
  CHECK(is_cyclic_arc(all.profile));
  CHECK_THROWS_AS(solve_brute_force(build_cell_matrix(a, 64), 32, BruteForceMode::all_subsets), ResourceError);
}

TEST_CASE("arc and rotation predicates") {
  const CellProfile p({1, 1, 0, 0, 0, 1});
  CHECK(is_cyclic_arc(p));
  CHECK_FALSE(is_cyclic_arc(CellProfile({1, 0, 1, 0})));
  CHECK(is_rotation_of(p, CellProfile({0, 1, 1, 1, 0, 0})));
  CHECK_FALSE(is_rotation_of(p, CellProfile({0, 1, 0, 1, 1, 0})));
}

TEST_CASE("closed-form solve reports gamma and the discretized profile") {
  const auto r = solve_closed_form(1, 2, 0.5, 0.5, 32);
  CHECK(r.method == CellMethod::closed_form);
  CHECK(r.energy == doctest::Approx(0.625));
  CHECK(r.profile.mean() == doctest::Approx(0.5));
}
