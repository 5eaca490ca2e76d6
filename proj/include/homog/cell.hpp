#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "homog/kernel.hpp"
#include "homog/parallel.hpp"
#include "homog/states.hpp"

namespace homog {

/// Piecewise-constant profile on a uniform n-cell grid of the unit cell,
/// values in [0, 1].
class CellProfile {
 public:
  /// Throws std::invalid_argument when n < 2 or a value leaves [0, 1].
  explicit CellProfile(std::vector<double> values);

  std::size_t n() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double mean() const { return mean_; }

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
};

/// Circulant matrix of exact cell-pair integrals of a(sigma - tau), scaled by
/// n^2 so that phi^T K phi / n^2 is the continuum integral for the
/// piecewise-constant phi.
struct CellKernelMatrix {
  std::size_t n = 0;
  std::vector<double> first_row;
  double kernel_mean = 0.0;

  double entry(std::size_t i, std::size_t j) const { return first_row[(j + n - i) % n]; }
};

/// Entries are symmetrised, (r[d] + r[n-d]) / 2; the quadratic form only sees
/// the symmetric part, and for symmetric kernels this is a no-op.
CellKernelMatrix build_cell_matrix(const PeriodicStepKernel& k, std::size_t n, const Executor& exec = Executor{});

enum class MatVecPath { automatic, direct, fft };

/// K * phi. automatic picks the FFT path for n >= 1024.
std::vector<double> apply_cell_matrix(const CellKernelMatrix& K, std::span<const double> phi,
                                      MatVecPath path = MatVecPath::automatic);

/// 2 J - 2 mean(a) t + mean(a) with J = phi^T K phi / n^2 and t = mean(phi).
/// Throws std::invalid_argument on a size mismatch.
double cell_energy(const CellKernelMatrix& K, const CellProfile& phi, MatVecPath path = MatVecPath::automatic);

// ---------------------------------------------------------------------------
// Closed form

/// Energy of the optimal arc profile of volume fraction t for the two-level
/// weight: 2 alpha t^2 - 2 abar t + abar, 2 beta (t^2 - t) - (alpha - beta)
/// lambda^2 / 2 + abar, or 2 alpha (1 - t)^2 + 2 abar t - abar on
/// [0, l/2], [l/2, 1 - l/2], [1 - l/2, 1]. This is the cell minimum when
/// alpha <= beta. Throws std::domain_error on out-of-range parameters.
double gamma_closed_form(double alpha, double beta, double lambda, double t);

enum class ProfileOrientation { low_cost_at_zero, low_cost_at_half };

/// Arcs [0, t/2) u [1 - t/2, 1), or the centred arc (1/2 - t/2, 1/2 + t/2).
std::vector<Arc> optimal_profile(double t, ProfileOrientation orientation);

/// Orientation matching the cheap phase of the weight: at zero when alpha <= beta.
ProfileOrientation orientation_for(double alpha, double beta);

/// Cell averages of the indicator of the arcs on an n-cell grid.
CellProfile discretize(std::span<const Arc> arcs, std::size_t n);

// ---------------------------------------------------------------------------
// Minimisers

enum class CellMethod { closed_form, projected_gradient, brute_force };
std::string_view to_string(CellMethod m);

struct CellSolveResult {
  CellProfile profile;
  double energy = 0.0;
  CellMethod method = CellMethod::closed_form;
  int iterations = 0;
  double constraint_residual = 0.0;
  bool converged = true;
};

/// Discretised optimal profile with its continuum closed-form energy.
CellSolveResult solve_closed_form(double alpha, double beta, double lambda, double t, std::size_t n);

struct ProjectionResult {
  std::vector<double> point;
  double residual = 0.0;  // |mean - t| after the final box projection
  int iterations = 0;
};

/// Dykstra alternation between the box [0,1]^n and the hyperplane mean = t,
/// stopped once the residual is <= tol.
ProjectionResult project_box_mean(std::span<const double> v, double t, double tol = 1e-12, int max_iter = 100000);

struct RelaxedOptions {
  double step = 0.0;  // 0 selects 1 / (2 L) with L the gradient Lipschitz constant
  int max_iter = 5000;
  double tol = 1e-12;  // stop when an iterate moves by less than this (max norm)
  std::uint64_t seed = 1;
};

/// Largest eigenvalue magnitude of K / n^2 by power iteration.
double spectral_radius(const CellKernelMatrix& K, int max_iter = 500, double rel_tol = 1e-12);

/// Projected gradient on the cell energy over {phi in [0,1]^n, mean = t},
/// restarted from the discretised arc profile, the constant t and a random
/// feasible point; the best of the three runs is returned.
/// converged is false when the best run hit max_iter.
CellSolveResult solve_relaxed(const CellKernelMatrix& K, double t, const RelaxedOptions& opts = {});

enum class BruteForceMode { all_subsets, arcs_only };
std::string_view to_string(BruteForceMode m);

inline constexpr double kMaxSubsetEnumeration = 1e7;

/// Exact minimiser over {0,1}-profiles with exactly k_ones ones. Energies
/// within 1e-12 (relative) are ties, resolved towards the lexicographically
/// smallest sorted index set. all_subsets throws ResourceError when
/// C(n, k_ones) > kMaxSubsetEnumeration or n > 62.
CellSolveResult solve_brute_force(const CellKernelMatrix& K, std::size_t k_ones, BruteForceMode mode,
                                  const Executor& exec = Executor{});

/// True when the {0,1}-profile's ones form a single cyclic block.
bool is_cyclic_arc(const CellProfile& p);

/// True when b is a cyclic rotation of a.
bool is_rotation_of(const CellProfile& a, const CellProfile& b);

}  // namespace homog
