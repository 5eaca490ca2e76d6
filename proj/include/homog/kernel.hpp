#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace homog {

/// Largest |t| accepted by the periodic argument reduction. Beyond this the
/// fractional part of a double has fewer than ~4 significant digits left.
inline constexpr double kMaxReducedArgument = 1e12;

/// 1-periodic piecewise-constant function on the real line.
///
/// Segment i is [breakpoints[i], breakpoints[i+1]) with an implicit final
/// breakpoint at 1. breakpoints[0] is always 0.
class PeriodicStepFunction {
 public:
  PeriodicStepFunction() = default;
  /// Throws std::invalid_argument on malformed breakpoints or non-finite values.
  PeriodicStepFunction(std::vector<double> breakpoints, std::vector<double> values);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t segment_count() const { return values_.size(); }
  double segment_length(std::size_t i) const;

  double eval(double t) const;
  /// Integral over one period.
  double integral() const;

 private:
  std::vector<double> breakpoints_{0.0};
  std::vector<double> values_{1.0};
};

/// Exact antiderivative data of a periodic step kernel a.
///
/// A(t) = int_0^t a and B(t) = int_0^t A decompose as
///   B(t) = mean * t^2 / 2 + linear * t + B_per(t),
/// with B_per 1-periodic, C^1 and piecewise quadratic. On segment i,
///   B_per(b_i + h) = c0[i] + c1[i] h + c2[i] h^2.
struct AntiderivativeTable {
  double mean = 0.0;
  double linear = 0.0;
  std::vector<double> A_at_breakpoints;  // A(b_0..b_m), last entry is A(1) == mean
  std::vector<double> c0, c1, c2;
};

/// B(t) split so that callers can cancel the unbounded parts symbolically.
struct SecondAntiderivative {
  double quadratic_part = 0.0;  // mean * t^2 / 2
  double linear_part = 0.0;     // linear * t
  double periodic_part = 0.0;   // B_per(t mod 1)

  double total() const { return quadratic_part + linear_part + periodic_part; }
};

/// Strictly positive 1-periodic step weight a with precomputed antiderivatives.
/// Immutable after construction.
class PeriodicStepKernel {
 public:
  /// Throws std::invalid_argument on malformed data or non-positive values.
  PeriodicStepKernel(std::vector<double> breakpoints, std::vector<double> values);

  static PeriodicStepKernel constant(double value);

  const PeriodicStepFunction& profile() const { return profile_; }
  std::span<const double> breakpoints() const { return profile_.breakpoints(); }
  std::span<const double> values() const { return profile_.values(); }
  const AntiderivativeTable& table() const { return table_; }

  double eval(double t) const { return profile_.eval(t); }
  double mean() const { return table_.mean; }
  double max_value() const;
  double min_value() const;
  bool is_constant() const;
  /// Number of discontinuities of a in one period (counting the wrap at 0).
  std::size_t jumps_per_period() const;

  /// A(t) = int_0^t a.
  double first_antiderivative(double t) const;
  /// B_per(t), the bounded periodic remainder of B. Throws std::range_error
  /// when |t| > kMaxReducedArgument.
  double periodic_part(double t) const;
  SecondAntiderivative second_antiderivative(double t) const;

 private:
  PeriodicStepFunction profile_;
  AntiderivativeTable table_;
};

/// The symmetric two-level weight: alpha on [0, l/2) u [1 - l/2, 1), beta in between.
/// Throws std::domain_error unless alpha, beta > 0 and 0 < lambda < 1.
PeriodicStepKernel make_lambda_kernel(double alpha, double beta, double lambda);

/// Segment-sum value of int_0^1 a.
double kernel_mean(const PeriodicStepKernel& k);

}  // namespace homog
