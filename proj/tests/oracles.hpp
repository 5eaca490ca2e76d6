// Independent reference computations used only by the tests. None of these
// call into the library's integration code.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// a as plain breakpoint/value arrays, 1-periodic.
struct Kernel {
  std::vector<double> b;  // b[0] == 0
  std::vector<double> v;

  double eval(double t) const {
    const double r = t - std::floor(t);
    std::size_t i = 0;
    while (i + 1 < b.size() && b[i + 1] <= r) ++i;
    return v[i];
  }
  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m += v[i] * ((i + 1 < b.size() ? b[i + 1] : 1.0) - b[i]);
    return m;
  }
  // int_0^t a for t >= 0 or t < 0, by whole periods plus a segment sum.
  double primitive(double t) const {
    const double whole = std::floor(t);
    const double r = t - whole;
    double s = whole * mean();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double lo = b[i], hi = i + 1 < b.size() ? b[i + 1] : 1.0;
      s += v[i] * std::max(0.0, std::min(r, hi) - lo);
    }
    return s;
  }
};

inline Kernel lambda_kernel(double alpha, double beta, double lambda) {
  return {{0.0, lambda / 2.0, 1.0 - lambda / 2.0}, {alpha, beta, alpha}};
}

// G(x) = int_{y0}^{y1} a((x - y)/eps) dy.
inline double inner(const Kernel& k, double eps, double x, double y0, double y1) {
  return eps * (k.primitive((x - y0) / eps) - k.primitive((x - y1) / eps));
}

// int_{x0}^{x1} G(x) dx. G is piecewise linear in x with kinks where
// (x - y0)/eps or (x - y1)/eps crosses a kernel breakpoint, so the
// trapezoid rule over the kinks is exact.
inline double rect(const Kernel& k, double eps, double x0, double x1, double y0, double y1) {
  std::vector<double> nodes{x0, x1};
  for (double y : {y0, y1}) {
    const double jlo = std::floor((x0 - y) / eps) - 1, jhi = std::ceil((x1 - y) / eps) + 1;
    for (double j = jlo; j <= jhi; ++j)
      for (double bp : k.b) {
        const double x = y + eps * (j + bp);
        if (x > x0 && x < x1) nodes.push_back(x);
      }
  }
  std::sort(nodes.begin(), nodes.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    s += 0.5 * (nodes[i + 1] - nodes[i]) * (inner(k, eps, nodes[i], y0, y1) + inner(k, eps, nodes[i + 1], y0, y1));
  return s;
}

// Triple-well (M < 0 for the infinite well) on a difference; NaN for +inf.
inline double well(double d, double M) {
  const double r = std::round(d);
  if (std::abs(d - r) <= 1e-12 && std::abs(r) <= 1.0) return r == 0.0 ? 1.0 : 0.0;
  return M < 0.0 ? NAN : M;
}

// F_eps of the step function (b, v) by summing rect over interval pairs.
inline double energy(const std::vector<double>& b, const std::vector<double>& v, const Kernel& k, double eps,
                     double M) {
  double s = 0.0;
  const auto end = [&](std::size_t i) { return i + 1 < b.size() ? b[i + 1] : 1.0; };
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double w = well(v[i] - v[j], M);
      if (w == 0.0) continue;
      s += w * rect(k, eps, b[i], end(i), b[j], end(j));
    }
  return s;
}

// Cell energy of the indicator of a set E (union of arcs) with |E| = t:
// abar - 2 int_E int_{E^c} a(x - y).
struct Interval {
  double lo, hi;
};
inline double set_energy(const Kernel& k, const std::vector<Interval>& E) {
  std::vector<Interval> comp;
  double at = 0.0;
  for (const auto& e : E) {
    if (e.lo > at) comp.push_back({at, e.lo});
    at = e.hi;
  }
  if (at < 1.0) comp.push_back({at, 1.0});
  double cross = 0.0;
  for (const auto& e : E)
    for (const auto& c : comp) cross += rect(k, 1.0, e.lo, e.hi, c.lo, c.hi);
  return k.mean() - 2.0 * cross;
}

// Euclidean projection onto {0 <= x <= 1, mean x = t}: x = clamp(v + mu)
// with mu found by bisection.
inline std::vector<double> project(const std::vector<double>& v, double t) {
  const auto mean_at = [&](double mu) {
    double s = 0.0;
    for (double x : v) s += std::clamp(x + mu, 0.0, 1.0);
    return s / static_cast<double>(v.size());
  };
  double lo = -1.0, hi = 1.0;
  for (double x : v) lo = std::min(lo, -x - 1.0), hi = std::max(hi, 1.0 - x + 1.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_at(mid) < t ? lo : hi) = mid;
  }
  std::vector<double> out;
  for (double x : v) out.push_back(std::clamp(x + 0.5 * (lo + hi), 0.0, 1.0));
  return out;
}

}  // namespace oracle
