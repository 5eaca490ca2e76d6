#pragma once

#include <string_view>

#include "homog/extended_real.hpp"
#include "homog/kernel.hpp"
#include "homog/parallel.hpp"
#include "homog/states.hpp"

namespace homog {

enum class EnergyMethod { exact, quadrature };

std::string_view to_string(EnergyMethod m);

/// Value of the double-integral energy of a step function.
struct EnergyReport {
  ExtendedReal value;
  EnergyMethod method = EnergyMethod::exact;
  double eps = 0.0;
  double bound = 0.0;  // a-priori error bound, 0 for the exact evaluator
};

/// Exact int_{x0}^{x1} int_{y0}^{y1} a((x - y) / eps) dy dx.
///
/// Uses mean * area plus eps^2 times the alternating sum of the periodic
/// remainder of the second antiderivative at the four corners; the quadratic
/// and linear parts of the antiderivative cancel analytically and are never
/// formed. Throws std::domain_error on a degenerate rectangle or eps <= 0 and
/// std::range_error when 1/eps exceeds kMaxReducedArgument.
double rect_integral(const PeriodicStepKernel& k, double eps, double x0, double x1, double y0, double y1);

/// F_eps(u) = int int a((x - y)/eps) f(u(x) - u(y)) dx dy over (0,1)^2, exactly.
///
/// The integrand is constant in f on every interval pair of u, so the energy
/// is a weighted sum of rect_integral over the P x P interval grid. Rows are
/// reduced with compensated sums and combined in row order, so the result
/// does not depend on the executor's thread count.
EnergyReport evaluate(const StepFunction& u, const Potential& p, const PeriodicStepKernel& k, double eps,
                      const Executor& exec = Executor{});

/// Midpoint-rule oracle for evaluate on a tensor grid of about n x n cells
/// aligned with the breakpoints of u. Requires n >= 2.
EnergyReport evaluate_quadrature(const StepFunction& u, const Potential& p, const PeriodicStepKernel& k,
                                 double eps, int n, const Executor& exec = Executor{});

}  // namespace homog
