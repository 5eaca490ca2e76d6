#include "homog/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace homog {

namespace {

// Fractional part in [0, 1).
double reduce(double t) {
  double r = t - std::floor(t);
  if (r >= 1.0) r = 0.0;  // t just below an integer rounds up
  return r;
}

void validate_breakpoints(const std::vector<double>& b, std::size_t n_values) {
  if (b.empty()) throw std::invalid_argument("periodic step: no breakpoints");
  if (b.size() != n_values)
    throw std::invalid_argument("periodic step: " + std::to_string(b.size()) + " breakpoints but " +
                                std::to_string(n_values) + " values");
  if (b.front() != 0.0) throw std::invalid_argument("periodic step: first breakpoint must be 0");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!std::isfinite(b[i]) || b[i] >= 1.0)
      throw std::invalid_argument("periodic step: breakpoints must lie in [0, 1)");
    if (i > 0 && !(b[i] > b[i - 1]))
      throw std::invalid_argument("periodic step: breakpoints must be strictly increasing");
  }
}

}  // namespace

PeriodicStepFunction::PeriodicStepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  validate_breakpoints(breakpoints_, values_.size());
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("periodic step: non-finite value");
}

double PeriodicStepFunction::segment_length(std::size_t i) const {
  const double end = i + 1 < breakpoints_.size() ? breakpoints_[i + 1] : 1.0;
  return end - breakpoints_[i];
}

double PeriodicStepFunction::eval(double t) const {
  const double r = reduce(t);
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), r);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double PeriodicStepFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * segment_length(i);
  return s;
}

PeriodicStepKernel::PeriodicStepKernel(std::vector<double> breakpoints, std::vector<double> values)
    : profile_(std::move(breakpoints), std::move(values)) {
  for (double v : profile_.values())
    if (!(v > 0.0)) throw std::invalid_argument("kernel values must be strictly positive");

  const auto b = profile_.breakpoints();
  const auto v = profile_.values();
  const std::size_t m = v.size();

  auto& T = table_;
  T.mean = is_constant() ? v[0] : profile_.integral();

  T.A_at_breakpoints.resize(m + 1);
  T.A_at_breakpoints[0] = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    T.A_at_breakpoints[i + 1] = T.A_at_breakpoints[i] + v[i] * profile_.segment_length(i);
  T.A_at_breakpoints[m] = T.mean;

  // A_per(s) = A(s) - mean*s is periodic and continuous; its period average
  // is the linear coefficient of B.
  std::vector<double> a_per(m);
  double linear = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double L = profile_.segment_length(i);
    a_per[i] = T.A_at_breakpoints[i] - T.mean * b[i];
    linear += a_per[i] * L + 0.5 * (v[i] - T.mean) * L * L;
  }
  T.linear = linear;

  T.c0.resize(m);
  T.c1.resize(m);
  T.c2.resize(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double L = profile_.segment_length(i);
    T.c0[i] = acc;
    T.c1[i] = a_per[i] - linear;
    T.c2[i] = 0.5 * (v[i] - T.mean);
    acc += T.c1[i] * L + T.c2[i] * L * L;
  }
}

PeriodicStepKernel PeriodicStepKernel::constant(double value) { return PeriodicStepKernel({0.0}, {value}); }

double PeriodicStepKernel::max_value() const {
  return *std::max_element(profile_.values().begin(), profile_.values().end());
}

double PeriodicStepKernel::min_value() const {
  return *std::min_element(profile_.values().begin(), profile_.values().end());
}

bool PeriodicStepKernel::is_constant() const {
  const auto v = profile_.values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

std::size_t PeriodicStepKernel::jumps_per_period() const {
  const auto v = profile_.values();
  std::size_t jumps = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != v[(i + 1) % v.size()]) ++jumps;
  return jumps;
}

double PeriodicStepKernel::first_antiderivative(double t) const {
  const double n = std::floor(t);
  const double r = reduce(t);
  const auto b = profile_.breakpoints();
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), r) - b.begin()) - 1;
  return n * table_.mean + table_.A_at_breakpoints[i] + profile_.values()[i] * (r - b[i]);
}

double PeriodicStepKernel::periodic_part(double t) const {
  if (!(std::abs(t) <= kMaxReducedArgument))
    throw std::range_error("periodic_part: |t| exceeds the supported argument range");
  const double r = reduce(t);
  const auto b = profile_.breakpoints();
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), r) - b.begin()) - 1;
  const double h = r - b[i];
  return table_.c0[i] + h * (table_.c1[i] + h * table_.c2[i]);
}

SecondAntiderivative PeriodicStepKernel::second_antiderivative(double t) const {
  SecondAntiderivative out;
  out.quadratic_part = 0.5 * table_.mean * t * t;
  out.linear_part = table_.linear * t;
  out.periodic_part = periodic_part(t);
  return out;
}

PeriodicStepKernel make_lambda_kernel(double alpha, double beta, double lambda) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("lambda kernel: alpha and beta must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("lambda kernel: lambda must lie in (0, 1)");
  return PeriodicStepKernel({0.0, lambda / 2.0, 1.0 - lambda / 2.0}, {alpha, beta, alpha});
}

double kernel_mean(const PeriodicStepKernel& k) { return k.mean(); }

}  // namespace homog
