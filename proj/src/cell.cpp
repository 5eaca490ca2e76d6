#include "homog/cell.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "homog/energy.hpp"

namespace homog {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Circular convolution row * phi through FFTW; the planner is not thread-safe.
std::vector<double> fft_convolve(std::span<const double> row, std::span<const double> phi) {
  const int n = static_cast<int>(row.size());
  const int m = n / 2 + 1;
  std::vector<double> real_in(row.begin(), row.end());
  std::vector<double> real_out(static_cast<std::size_t>(n));
  auto* spec_row = fftw_alloc_complex(static_cast<std::size_t>(m));
  auto* spec_phi = fftw_alloc_complex(static_cast<std::size_t>(m));
  fftw_plan forward, backward;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_1d(n, real_in.data(), spec_row, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spec_row, real_out.data(), FFTW_ESTIMATE);
  }
  fftw_execute_dft_r2c(forward, real_in.data(), spec_row);
  std::copy(phi.begin(), phi.end(), real_in.begin());
  fftw_execute_dft_r2c(forward, real_in.data(), spec_phi);
  for (int i = 0; i < m; ++i) {
    const std::complex<double> a(spec_row[i][0], spec_row[i][1]);
    const std::complex<double> b(spec_phi[i][0], spec_phi[i][1]);
    const auto c = a * b;
    spec_row[i][0] = c.real();
    spec_row[i][1] = c.imag();
  }
  fftw_execute_dft_c2r(backward, spec_row, real_out.data());
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_free(spec_row);
  fftw_free(spec_phi);
  for (double& x : real_out) x /= n;
  return real_out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

double mean_of(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double energy_from(const CellKernelMatrix& K, std::span<const double> phi, std::span<const double> Kphi) {
  const double n = static_cast<double>(K.n);
  const double J = dot(phi, Kphi) / (n * n);
  return 2.0 * J - 2.0 * K.kernel_mean * mean_of(phi) + K.kernel_mean;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

// Sum of K over all ordered pairs of the index set.
double pair_sum(const CellKernelMatrix& K, std::span<const std::size_t> idx) {
  double diag = 0.0, off = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    diag += K.entry(idx[a], idx[a]);
    for (std::size_t b = a + 1; b < idx.size(); ++b) off += K.entry(idx[a], idx[b]);
  }
  return diag + 2.0 * off;
}

struct Candidate {
  double sum = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> indices;
  std::size_t visited = 0;
};

bool tie(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// Enumeration is in lexicographic order, so keeping the first of tied
// candidates keeps the lexicographically smallest index set.
void offer(Candidate& best, double sum, std::span<const std::size_t> idx) {
  ++best.visited;
  if (best.indices.empty() && !std::isfinite(best.sum)) {
    best.sum = sum;
    best.indices.assign(idx.begin(), idx.end());
    return;
  }
  if (sum < best.sum && !tie(sum, best.sum)) {
    best.sum = sum;
    best.indices.assign(idx.begin(), idx.end());
  }
}

void merge(Candidate& into, const Candidate& other) {
  const std::size_t visited = into.visited + other.visited;
  if (!other.indices.empty() || std::isfinite(other.sum)) {
    if (!std::isfinite(into.sum) || (other.sum < into.sum && !tie(other.sum, into.sum))) {
      into.sum = other.sum;
      into.indices = other.indices;
    }
  }
  into.visited = visited;
}

}  // namespace

CellProfile::CellProfile(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("cell profile: need at least 2 cells");
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("cell profile: values must lie in [0, 1]");
  mean_ = mean_of(values_);
}

CellKernelMatrix build_cell_matrix(const PeriodicStepKernel& k, std::size_t n, const Executor& exec) {
  if (n < 2) throw std::invalid_argument("cell matrix: n must be >= 2");
  const double nn = static_cast<double>(n);
  const auto raw = exec.map<double>(n, [&](std::size_t d) {
    const double y0 = static_cast<double>(d) / nn;
    const double y1 = static_cast<double>(d + 1) / nn;
    return nn * nn * rect_integral(k, 1.0, 0.0, 1.0 / nn, y0, y1);
  });
  CellKernelMatrix K;
  K.n = n;
  K.kernel_mean = k.mean();
  K.first_row.resize(n);
  K.first_row[0] = raw[0];
  for (std::size_t d = 1; d < n; ++d) K.first_row[d] = 0.5 * (raw[d] + raw[n - d]);
  return K;
}

std::vector<double> apply_cell_matrix(const CellKernelMatrix& K, std::span<const double> phi, MatVecPath path) {
  if (phi.size() != K.n) throw std::invalid_argument("cell matrix: dimension mismatch");
  if (path == MatVecPath::automatic) path = K.n >= 1024 ? MatVecPath::fft : MatVecPath::direct;
  if (path == MatVecPath::fft) return fft_convolve(K.first_row, phi);
  const std::size_t n = K.n;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += K.first_row[(j + n - i) % n] * phi[j];
    out[i] = s;
  }
  return out;
}

double cell_energy(const CellKernelMatrix& K, const CellProfile& phi, MatVecPath path) {
  if (phi.n() != K.n) throw std::invalid_argument("cell_energy: dimension mismatch");
  const auto Kphi = apply_cell_matrix(K, phi.values(), path);
  return energy_from(K, phi.values(), Kphi);
}

double gamma_closed_form(double alpha, double beta, double lambda, double t) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("gamma: alpha and beta must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("gamma: lambda must lie in (0, 1)");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("gamma: t must lie in [0, 1]");
  const double abar = lambda * alpha + (1.0 - lambda) * beta;
  if (t <= lambda / 2.0) return 2.0 * alpha * t * t - 2.0 * abar * t + abar;
  if (t <= 1.0 - lambda / 2.0) return 2.0 * beta * (t * t - t) - (alpha - beta) / 2.0 * lambda * lambda + abar;
  return 2.0 * alpha * (1.0 - t) * (1.0 - t) + 2.0 * abar * t - abar;
}

std::vector<Arc> optimal_profile(double t, ProfileOrientation orientation) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("optimal_profile: t must lie in [0, 1]");
  if (t == 0.0) return {};
  if (t == 1.0) return {Arc{0.0, 1.0}};
  if (orientation == ProfileOrientation::low_cost_at_half) return {Arc{0.5 - t / 2.0, 0.5 + t / 2.0}};
  return {Arc{0.0, t / 2.0}, Arc{1.0 - t / 2.0, 1.0}};
}

ProfileOrientation orientation_for(double alpha, double beta) {
  return alpha <= beta ? ProfileOrientation::low_cost_at_zero : ProfileOrientation::low_cost_at_half;
}

CellProfile discretize(std::span<const Arc> arcs, std::size_t n) {
  const double nn = static_cast<double>(n);
  std::vector<double> values(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const double lo = static_cast<double>(c) / nn;
    const double hi = static_cast<double>(c + 1) / nn;
    double covered = 0.0;
    for (const Arc& a : arcs) covered += std::max(0.0, std::min(hi, a.end) - std::max(lo, a.begin));
    values[c] = std::clamp(covered * nn, 0.0, 1.0);
  }
  return CellProfile(std::move(values));
}

std::string_view to_string(CellMethod m) {
  switch (m) {
    case CellMethod::closed_form: return "closed_form";
    case CellMethod::projected_gradient: return "projected_gradient";
    case CellMethod::brute_force: return "brute_force";
  }
  return "unknown";
}

std::string_view to_string(BruteForceMode m) { return m == BruteForceMode::all_subsets ? "all_subsets" : "arcs_only"; }

CellSolveResult solve_closed_form(double alpha, double beta, double lambda, double t, std::size_t n) {
  const auto arcs = optimal_profile(t, orientation_for(alpha, beta));
  CellProfile profile = discretize(arcs, n);
  const double residual = std::abs(profile.mean() - t);
  return {std::move(profile), gamma_closed_form(alpha, beta, lambda, t), CellMethod::closed_form, 0, residual, true};
}

ProjectionResult project_box_mean(std::span<const double> v, double t, double tol, int max_iter) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("projection: t must lie in [0, 1]");
  const std::size_t n = v.size();
  std::vector<double> x(v.begin(), v.end());
  std::vector<double> p(n, 0.0), q(n, 0.0), y(n);
  for (double& xi : x) xi = std::clamp(xi, 0.0, 1.0);
  ProjectionResult out;
  double residual = std::abs(mean_of(x) - t);
  // Dykstra from the original point; the clamp above is only an early exit.
  if (residual > tol) {
    x.assign(v.begin(), v.end());
    for (int it = 1; it <= max_iter; ++it) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + p[i];
      const double shift = t - mean_of(y);
      for (std::size_t i = 0; i < n; ++i) {
        const double yi = y[i] + shift;
        p[i] = x[i] + p[i] - yi;
        y[i] = yi;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double xi = std::clamp(y[i] + q[i], 0.0, 1.0);
        q[i] = y[i] + q[i] - xi;
        x[i] = xi;
      }
      residual = std::abs(mean_of(x) - t);
      out.iterations = it;
      if (residual <= tol) break;
    }
  }
  out.point = std::move(x);
  out.residual = residual;
  return out;
}

double spectral_radius(const CellKernelMatrix& K, int max_iter, double rel_tol) {
  const std::size_t n = K.n;
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * std::sin(static_cast<double>(i) + 1.0);
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double norm_v = std::sqrt(dot(v, v));
    auto w = apply_cell_matrix(K, v);
    for (double& x : w) x *= scale;
    const double norm_w = std::sqrt(dot(w, w));
    const double next = norm_w / norm_v;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm_w;
    if (std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

CellSolveResult solve_relaxed(const CellKernelMatrix& K, double t, const RelaxedOptions& opts) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("solve_relaxed: t must lie in [0, 1]");
  const std::size_t n = K.n;
  const double nn = static_cast<double>(n);
  const double lipschitz = 4.0 * spectral_radius(K);
  const double step = opts.step > 0.0 ? opts.step : 1.0 / (2.0 * lipschitz);

  std::vector<std::vector<double>> seeds;
  {
    const auto arcs = optimal_profile(t, ProfileOrientation::low_cost_at_zero);
    const auto p = discretize(arcs, n);
    seeds.emplace_back(p.values().begin(), p.values().end());
  }
  seeds.emplace_back(n, t);
  {
    std::mt19937_64 rng(opts.seed);
    std::vector<double> r(n);
    for (double& x : r) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    seeds.push_back(std::move(r));
  }

  struct Run {
    std::vector<double> best;
    double energy = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
  };
  std::vector<Run> runs;
  for (const auto& seed : seeds) {
    Run run;
    auto x = project_box_mean(seed, t).point;
    auto Kx = apply_cell_matrix(K, x);
    run.best = x;
    run.energy = energy_from(K, x, Kx);
    std::vector<double> y(n);
    for (int it = 1; it <= opts.max_iter; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        const double grad = 4.0 / (nn * nn) * Kx[i] - 2.0 * K.kernel_mean / nn;
        y[i] = x[i] - step * grad;
      }
      auto next = project_box_mean(y, t).point;
      double move = 0.0;
      for (std::size_t i = 0; i < n; ++i) move = std::max(move, std::abs(next[i] - x[i]));
      x = std::move(next);
      Kx = apply_cell_matrix(K, x);
      const double e = energy_from(K, x, Kx);
      run.iterations = it;
      if (e < run.energy) {
        run.energy = e;
        run.best = x;
      }
      if (move <= opts.tol) {
        run.converged = true;
        break;
      }
    }
    if (opts.max_iter <= 0) run.converged = true;
    runs.push_back(std::move(run));
  }

  const auto best = std::min_element(runs.begin(), runs.end(),
                                     [](const Run& a, const Run& b) { return a.energy < b.energy; });
  for (double& v : best->best) v = std::clamp(v, 0.0, 1.0);
  CellProfile profile(best->best);
  const double residual = std::abs(profile.mean() - t);
  return {std::move(profile), best->energy, CellMethod::projected_gradient, best->iterations, residual,
          best->converged};
}

CellSolveResult solve_brute_force(const CellKernelMatrix& K, std::size_t k_ones, BruteForceMode mode,
                                  const Executor& exec) {
  const std::size_t n = K.n;
  if (k_ones > n) throw std::invalid_argument("brute force: k_ones exceeds n");

  Candidate best;
  if (k_ones == 0) {
    offer(best, 0.0, {});
  } else if (mode == BruteForceMode::arcs_only) {
    const std::size_t starts = k_ones == n ? 1 : n;
    std::vector<Candidate> per_start = exec.map<Candidate>(starts, [&](std::size_t s) {
      std::vector<std::size_t> idx(k_ones);
      for (std::size_t a = 0; a < k_ones; ++a) idx[a] = (s + a) % n;
      std::sort(idx.begin(), idx.end());
      Candidate c;
      offer(c, pair_sum(K, idx), idx);
      return c;
    });
    // Different starts are not in lexicographic order; resolve ties explicitly.
    for (const auto& c : per_start) {
      ++best.visited;
      if (best.indices.empty() || (c.sum < best.sum && !tie(c.sum, best.sum)) ||
          (tie(c.sum, best.sum) && c.indices < best.indices)) {
        best.sum = c.sum;
        best.indices = c.indices;
      }
    }
  } else {
    if (n > 62) throw ResourceError("brute force: all_subsets supports n <= 62");
    const double count = binomial(n, k_ones);
    if (count > kMaxSubsetEnumeration)
      throw ResourceError("brute force: C(" + std::to_string(n) + ", " + std::to_string(k_ones) +
                          ") subsets exceed the enumeration bound");
    // Partition by the smallest element; each block enumerates its remaining
    // k-1 elements in lexicographic order.
    auto blocks = exec.map<Candidate>(n - k_ones + 1, [&](std::size_t first) {
      Candidate c;
      std::vector<std::size_t> idx(k_ones);
      idx[0] = first;
      for (std::size_t a = 1; a < k_ones; ++a) idx[a] = first + a;
      while (true) {
        offer(c, pair_sum(K, idx), idx);
        // Advance idx[1..] to the next combination of {first+1, ..., n-1}.
        std::size_t a = k_ones;
        while (a > 1 && idx[a - 1] == n - k_ones + (a - 1)) --a;
        if (a <= 1) break;
        ++idx[a - 1];
        for (std::size_t b = a; b < k_ones; ++b) idx[b] = idx[b - 1] + 1;
      }
      return c;
    });
    for (const auto& c : blocks) merge(best, c);
  }

  std::vector<double> values(n, 0.0);
  for (std::size_t i : best.indices) values[i] = 1.0;
  const double nn = static_cast<double>(n);
  const double t = static_cast<double>(k_ones) / nn;
  const double energy = 2.0 * best.sum / (nn * nn) - 2.0 * K.kernel_mean * t + K.kernel_mean;
  return {CellProfile(std::move(values)), energy, CellMethod::brute_force,
          static_cast<int>(std::min<std::size_t>(best.visited, std::numeric_limits<int>::max())), 0.0, true};
}

bool is_cyclic_arc(const CellProfile& p) {
  const auto v = p.values();
  const std::size_t n = v.size();
  std::size_t falls = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] != 0.0 && v[i] != 1.0) return false;
    if (v[i] == 1.0 && v[(i + 1) % n] == 0.0) ++falls;
  }
  return falls <= 1;
}

bool is_rotation_of(const CellProfile& a, const CellProfile& b) {
  if (a.n() != b.n()) return false;
  const std::size_t n = a.n();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i) same = a.values()[i] == b.values()[(i + shift) % n];
    if (same) return true;
  }
  return false;
}

}  // namespace homog
