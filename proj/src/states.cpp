#include "homog/states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace homog {

namespace {

// Intervals shorter than this are treated as rounding artefacts of a
// breakpoint computation and dropped.
constexpr double kMinIntervalLength = 1e-14;

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.empty()) throw std::invalid_argument("step function: no breakpoints");
  if (breakpoints_.size() != values_.size())
    throw std::invalid_argument("step function: " + std::to_string(breakpoints_.size()) + " breakpoints but " +
                                std::to_string(values_.size()) + " values");
  if (breakpoints_.front() != 0.0) throw std::invalid_argument("step function: first breakpoint must be 0");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i]) || breakpoints_[i] >= 1.0)
      throw std::invalid_argument("step function: breakpoints must lie in [0, 1)");
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
      throw std::invalid_argument("step function: breakpoints must be strictly increasing");
    if (!std::isfinite(values_[i])) throw std::invalid_argument("step function: non-finite value");
  }
}

double StepFunction::eval(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.begin()) return values_.front();
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::ess_inf() const { return *std::min_element(values_.begin(), values_.end()); }
double StepFunction::ess_sup() const { return *std::max_element(values_.begin(), values_.end()); }

StepFunction StepFunction::shifted(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x += c;
  return StepFunction(breakpoints_, std::move(v));
}

StepFunction StepFunction::simplified() const {
  std::vector<double> b{breakpoints_.front()};
  std::vector<double> v{values_.front()};
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] == v.back()) continue;
    b.push_back(breakpoints_[i]);
    v.push_back(values_[i]);
  }
  return StepFunction(std::move(b), std::move(v));
}

double integrate(const StepFunction& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.interval_count(); ++i) s += u.values()[i] * u.interval_length(i);
  return s;
}

StepFunction jump_function(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("jump_function: s must lie in (0, 1)");
  return StepFunction({0.0, s}, {1.0, 0.0});
}

Potential Potential::finite(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw std::domain_error("finite potential: M must be a positive number");
  return {Kind::finite_M, M};
}

ExtendedReal eval_potential(const Potential& p, double z, double tol) {
  static constexpr std::array<double, 3> kWells{-1.0, 0.0, 1.0};
  static constexpr std::array<double, 3> kWellValues{0.0, 1.0, 0.0};
  std::size_t nearest = 0;
  for (std::size_t w = 1; w < kWells.size(); ++w)
    if (std::abs(z - kWells[w]) < std::abs(z - kWells[nearest])) nearest = w;
  if (std::abs(z - kWells[nearest]) <= tol) return kWellValues[nearest];
  if (p.kind == Potential::Kind::finite_M) return p.M;
  return ExtendedReal::infinity();
}

DecomposeResult decompose(const StepFunction& u, double tol) {
  std::vector<double> sorted(u.values().begin(), u.values().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> levels;  // smallest member of each cluster
  for (double v : sorted)
    if (levels.empty() || v - levels.back() > tol) levels.push_back(v);

  if (levels.size() == 2 && std::abs(levels[1] - levels[0] - 1.0) <= tol) {
    const double z = levels[0];
    std::vector<double> chi(u.values().size());
    for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = u.values()[i] - z > 0.5 ? 1.0 : 0.0;
    return AdmissibleDecomposition{z, StepFunction(std::vector<double>(u.breakpoints().begin(), u.breakpoints().end()),
                                                   std::move(chi))};
  }
  if (levels.size() == 1) {
    return AdmissibleDecomposition{
        levels[0], StepFunction(std::vector<double>(u.breakpoints().begin(), u.breakpoints().end()),
                                std::vector<double>(u.values().size(), 0.0))};
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j)
      if (std::abs(levels[j] - levels[i] - 1.0) > tol) return NotAdmissible{levels[i], levels[j]};
  // Unreachable: three or more clusters always contain a gap of about 2.
  return NotAdmissible{levels.front(), levels.back()};
}

StepFunction reconstruct(const AdmissibleDecomposition& d) { return d.chi.shifted(d.z); }

AdmissibleInterval admissible_interval(const StepFunction& u) {
  const double mass = integrate(u);
  const double lo = u.ess_inf();
  const double hi = u.ess_sup();
  return {mass - lo, mass - hi + 1.0, hi - lo > 1.0};
}

PeriodicStepFunction indicator_of_arcs(std::span<const Arc> arcs) {
  std::vector<Arc> sorted(arcs.begin(), arcs.end());
  std::sort(sorted.begin(), sorted.end(), [](const Arc& a, const Arc& b) { return a.begin < b.begin; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Arc& a = sorted[i];
    if (!(a.begin >= 0.0 && a.begin < a.end && a.end <= 1.0))
      throw std::invalid_argument("arc must satisfy 0 <= begin < end <= 1");
    if (i > 0 && a.begin < sorted[i - 1].end) throw std::invalid_argument("arcs overlap");
  }
  std::vector<double> b{0.0};
  std::vector<double> v{0.0};
  auto push = [&](double at, double value) {
    if (at >= 1.0) return;
    if (at == b.back()) {
      v.back() = value;
    } else if (value != v.back()) {
      b.push_back(at);
      v.push_back(value);
    }
    // Merging can leave two equal neighbours after an overwrite at 0.
    if (b.size() >= 2 && v[v.size() - 1] == v[v.size() - 2]) {
      b.pop_back();
      v.pop_back();
    }
  };
  for (const Arc& a : sorted) {
    push(a.begin, 1.0);
    push(a.end, 0.0);
  }
  return PeriodicStepFunction(std::move(b), std::move(v));
}

StepFunction oscillate(const PeriodicStepFunction& cell, double z, double eps, std::size_t max_breakpoints) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("oscillate: eps must lie in (0, 1]");
  const double periods = std::ceil(1.0 / eps);
  const auto cb = cell.breakpoints();
  const auto cv = cell.values();
  if ((periods + 1.0) * static_cast<double>(cb.size()) > static_cast<double>(max_breakpoints))
    throw ResourceError("oscillate: " + std::to_string(periods) + " periods exceed the breakpoint cap of " +
                        std::to_string(max_breakpoints));

  std::vector<double> b{0.0};
  std::vector<double> v{z + cv[0]};
  for (std::size_t p = 0;; ++p) {
    bool done = false;
    for (std::size_t k = 0; k < cb.size(); ++k) {
      if (p == 0 && k == 0) continue;
      const double x = (static_cast<double>(p) + cb[k]) * eps;
      if (x >= 1.0 - kMinIntervalLength) {
        done = true;
        break;
      }
      const double value = z + cv[k];
      if (x - b.back() <= kMinIntervalLength) {
        v.back() = value;
        continue;
      }
      if (value == v.back()) continue;
      b.push_back(x);
      v.push_back(value);
    }
    if (done) break;
  }
  return StepFunction(std::move(b), std::move(v)).simplified();
}

StepFunction oscillating_profile(double z, std::span<const Arc> arcs, double eps, std::size_t max_breakpoints) {
  return oscillate(indicator_of_arcs(arcs), z, eps, max_breakpoints);
}

}  // namespace homog
