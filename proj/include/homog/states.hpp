#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "homog/extended_real.hpp"
#include "homog/kernel.hpp"

namespace homog {

/// Raised when a construction would exceed a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piecewise-constant function on (0, 1).
///
/// Interval i is [breakpoints[i], breakpoints[i+1]) with an implicit final
/// breakpoint at 1. Zero-length intervals cannot be represented.
class StepFunction {
 public:
  StepFunction() = default;
  /// Throws std::invalid_argument on malformed data.
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  static StepFunction constant(double c) { return StepFunction({0.0}, {c}); }

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t interval_count() const { return values_.size(); }
  double interval_begin(std::size_t i) const { return breakpoints_[i]; }
  double interval_end(std::size_t i) const { return i + 1 < breakpoints_.size() ? breakpoints_[i + 1] : 1.0; }
  double interval_length(std::size_t i) const { return interval_end(i) - interval_begin(i); }

  /// Value at x in [0, 1), left-closed convention.
  double eval(double x) const;
  double ess_inf() const;
  double ess_sup() const;

  /// u + c.
  StepFunction shifted(double c) const;
  /// Same function with adjacent equal-valued intervals merged.
  StepFunction simplified() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<double> breakpoints_{0.0};
  std::vector<double> values_{0.0};
};

/// Exact integral over (0, 1).
double integrate(const StepFunction& u);

/// The step function x -> u_s(x) = 1 on (0, s], 0 on (s, 1).
StepFunction jump_function(double s);

// ---------------------------------------------------------------------------
// Potentials

struct Potential {
  enum class Kind { infinite_triple_well, finite_M };

  Kind kind = Kind::infinite_triple_well;
  double M = 0.0;  // only meaningful for finite_M

  static Potential infinite() { return {}; }
  /// Throws std::domain_error unless M > 0.
  static Potential finite(double M);
};

inline constexpr double kDefaultSnapTolerance = 1e-12;

/// 0 on {-1, 1}, 1 at 0, and +inf (or M) elsewhere; membership is tested
/// with |z - w| <= tol, ties going to the nearest well.
ExtendedReal eval_potential(const Potential& p, double z, double tol = kDefaultSnapTolerance);

// ---------------------------------------------------------------------------
// Two-level structure

/// u = z + chi with chi taking values in {0, 1} on the same intervals as u.
struct AdmissibleDecomposition {
  double z = 0.0;
  StepFunction chi;
};

/// A pair of value clusters of u whose gap is neither 0 nor 1.
struct NotAdmissible {
  double low = 0.0;
  double high = 0.0;
  double gap() const { return high - low; }
};

using DecomposeResult = std::variant<AdmissibleDecomposition, NotAdmissible>;

/// Splits u into z + chi when its values cluster (within tol) to {z} or
/// {z, z + 1}. z is the lower level.
DecomposeResult decompose(const StepFunction& u, double tol = kDefaultSnapTolerance);

/// z + chi, interval by interval.
StepFunction reconstruct(const AdmissibleDecomposition& d);

/// [iota, sigma] with iota = int u - ess-inf u and sigma = int u - ess-sup u + 1.
struct AdmissibleInterval {
  double iota = 0.0;
  double sigma = 0.0;
  bool empty = false;
};

AdmissibleInterval admissible_interval(const StepFunction& u);

// ---------------------------------------------------------------------------
// Cell indicators and oscillating profiles

/// Arc [begin, end) of the unit cell; 0 <= begin < end <= 1.
struct Arc {
  double begin = 0.0;
  double end = 0.0;
  double length() const { return end - begin; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Indicator of a finite union of disjoint arcs, as a periodic step function.
/// Throws std::invalid_argument on overlapping or out-of-range arcs.
PeriodicStepFunction indicator_of_arcs(std::span<const Arc> arcs);

inline constexpr std::size_t kDefaultMaxBreakpoints = 10'000'000;

/// x -> z + cell(x / eps) on (0, 1). Requires eps in (0, 1].
/// Throws ResourceError when the result would exceed max_breakpoints intervals.
StepFunction oscillate(const PeriodicStepFunction& cell, double z, double eps,
                       std::size_t max_breakpoints = kDefaultMaxBreakpoints);

/// x -> z + phi(x / eps) for phi the indicator of the given arcs.
StepFunction oscillating_profile(double z, std::span<const Arc> arcs, double eps,
                                 std::size_t max_breakpoints = kDefaultMaxBreakpoints);

}  // namespace homog
