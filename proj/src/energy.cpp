#include "homog/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace homog {

std::string_view to_string(EnergyMethod m) { return m == EnergyMethod::exact ? "exact" : "quadrature"; }

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::domain_error("eps must be a positive number");
  if (1.0 / eps > kMaxReducedArgument) throw std::range_error("1/eps exceeds the supported argument range");
}

// Pair weights f(u_i - u_j) on the interval grid; nullopt when the energy is +inf.
std::optional<std::vector<double>> pair_weights(const StepFunction& u, const Potential& p) {
  const std::size_t P = u.interval_count();
  std::vector<double> w(P * P);
  if (p.kind == Potential::Kind::infinite_triple_well) {
    const auto dec = decompose(u);
    const auto* ok = std::get_if<AdmissibleDecomposition>(&dec);
    if (ok == nullptr) return std::nullopt;
    const auto chi = ok->chi.values();
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = 0; j < P; ++j) w[i * P + j] = chi[i] == chi[j] ? 1.0 : 0.0;
    return w;
  }
  const auto v = u.values();
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < P; ++j) w[i * P + j] = eval_potential(p, v[i] - v[j]).value();
  return w;
}

double sum_in_order(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace

double rect_integral(const PeriodicStepKernel& k, double eps, double x0, double x1, double y0, double y1) {
  if (!(x0 < x1) || !(y0 < y1)) throw std::domain_error("rect_integral: degenerate rectangle");
  check_eps(eps);
  const double corners = k.periodic_part((x1 - y0) / eps) - k.periodic_part((x1 - y1) / eps) -
                         k.periodic_part((x0 - y0) / eps) + k.periodic_part((x0 - y1) / eps);
  return k.mean() * (x1 - x0) * (y1 - y0) + eps * eps * corners;
}

EnergyReport evaluate(const StepFunction& u, const Potential& p, const PeriodicStepKernel& k, double eps,
                      const Executor& exec) {
  check_eps(eps);
  EnergyReport report{ExtendedReal::infinity(), EnergyMethod::exact, eps, 0.0};
  const auto weights = pair_weights(u, p);
  if (!weights) return report;

  const std::size_t P = u.interval_count();
  const auto rows = exec.map<double>(P, [&](std::size_t i) {
    CompensatedSum row;
    const double x0 = u.interval_begin(i), x1 = u.interval_end(i);
    for (std::size_t j = 0; j < P; ++j) {
      const double w = (*weights)[i * P + j];
      if (w == 0.0) continue;
      row.add(w * rect_integral(k, eps, x0, x1, u.interval_begin(j), u.interval_end(j)));
    }
    return row.value();
  });
  report.value = sum_in_order(rows);
  return report;
}

EnergyReport evaluate_quadrature(const StepFunction& u, const Potential& p, const PeriodicStepKernel& k,
                                 double eps, int n, const Executor& exec) {
  if (n < 2) throw std::domain_error("evaluate_quadrature: n must be >= 2");
  check_eps(eps);
  EnergyReport report{ExtendedReal::infinity(), EnergyMethod::quadrature, eps, 0.0};
  const auto weights = pair_weights(u, p);
  if (!weights) return report;

  // Sub-cells per interval of u, so that no cell straddles a breakpoint.
  const std::size_t P = u.interval_count();
  std::vector<std::size_t> first_cell(P + 1, 0);
  std::vector<double> centers, widths;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < P; ++i) {
    const double L = u.interval_length(i);
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(n * L)));
    const double h = L / static_cast<double>(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      centers.push_back(u.interval_begin(i) + (static_cast<double>(c) + 0.5) * h);
      widths.push_back(h);
      owner.push_back(i);
    }
    first_cell[i + 1] = centers.size();
  }
  const std::size_t N = centers.size();

  const auto rows = exec.map<double>(N, [&](std::size_t cx) {
    CompensatedSum row;
    const std::size_t i = owner[cx];
    for (std::size_t j = 0; j < P; ++j) {
      const double w = (*weights)[i * P + j];
      if (w == 0.0) continue;
      CompensatedSum block;
      for (std::size_t cy = first_cell[j]; cy < first_cell[j + 1]; ++cy)
        block.add(k.eval((centers[cx] - centers[cy]) / eps) * widths[cy]);
      row.add(w * block.value());
    }
    return row.value() * widths[cx];
  });
  report.value = sum_in_order(rows);

  // Error bound. On a cell not cut by a jump line x - y = eps * (j + b) of
  // the kernel the integrand is constant and the midpoint rule is exact. On
  // a cut cell the error is at most h_max^2 * osc(a) * max w. There are at
  // most jumps * (2/eps + 2) such lines in (0,1)^2 and a line of slope one
  // meets at most 2N cells of the N x N grid. A rounding allowance covers
  // the compensated summation.
  const double h_max = *std::max_element(widths.begin(), widths.end());
  const double w_max = *std::max_element(weights->begin(), weights->end());
  const double osc = k.max_value() - k.min_value();
  const double lines = static_cast<double>(k.jumps_per_period()) * (2.0 / eps + 2.0);
  const double cut_cells = std::min(lines * 2.0 * static_cast<double>(N), static_cast<double>(N) * N);
  const double rounding = 64.0 * static_cast<double>(N) * std::numeric_limits<double>::epsilon() * k.max_value() *
                          std::max(w_max, 1.0);
  report.bound = osc * w_max * h_max * h_max * cut_cells + rounding;
  return report;
}

}  // namespace homog
