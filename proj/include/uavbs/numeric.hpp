#pragma once

// One-dimensional search primitives shared by the radius and MWA code.

#include <cmath>
#include <concepts>
#include <utility>

namespace uavbs::numeric {

/// Bisection on [lo, hi] for a function whose predicate `inside(x)` is true
/// on a prefix [lo, x0] and false on (x0, hi]. Returns the last point known
/// to be inside once the bracket is narrower than `tol`.
template <std::invocable<double> Pred>
double bisect_boundary(Pred&& inside, double lo, double hi, double tol)
{
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (inside(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Sign-change refinement of f on [lo, hi]; requires f(lo)·f(hi) ≤ 0.
template <std::invocable<double> F>
double bisect_root(F&& f, double lo, double hi, double tol)
{
  double f_lo = f(lo);
  if (f_lo == 0.0) {
    return lo;
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      return mid;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

/// Golden-section maximization of a unimodal f on [lo, hi].
template <std::invocable<double> F>
double golden_section_maximize(F&& f, double lo, double hi, double tol)
{
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace uavbs::numeric
