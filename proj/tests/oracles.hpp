#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they check.

#include "uavbs/channel.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace uavbs::oracle {

/// LoS/NLoS expansion of the mean loss, evaluated in long double:
/// L_LoS·P + L_NLoS·(1 - P) with free-space loss 20·log10(4π·fc·d / c).
inline long double expanded_mean_loss(long double h, long double r, const Environment& env, const RadioConfig& radio)
{
  const long double pi = std::numbers::pi_v<long double>;
  const long double d = std::sqrt(h * h + r * r);
  const long double fspl = 20.0L * std::log10(4.0L * pi * radio.fc_hz * d / 299792458.0L);
  const long double theta = std::atan2(h, r) * 180.0L / pi;
  const long double p = 1.0L / (1.0L + env.a * std::exp(-env.b * (theta - env.a)));
  return (fspl + env.eta_los) * p + (fspl + env.eta_nlos) * (1.0L - p);
}

/// Radius along the constant-θ ray where the loss hits l_th, solved in closed form.
inline long double radius_on_ray(long double theta_deg, long double l_th, const Environment& env,
                                 const RadioConfig& radio)
{
  const long double pi = std::numbers::pi_v<long double>;
  const long double p = 1.0L / (1.0L + env.a * std::exp(-env.b * (theta_deg - env.a)));
  const long double excess = env.eta_los * p + env.eta_nlos * (1.0L - p);
  const long double d = std::pow(10.0L, (l_th - excess) / 20.0L) * 299792458.0L / (4.0L * pi * radio.fc_hz);
  return d * std::cos(theta_deg * pi / 180.0L);
}

/// θ maximizing radius_on_ray by a dense scan followed by local refinement.
inline double best_elevation_by_scan(const Environment& env, const RadioConfig& radio)
{
  double best = 0.0;
  long double best_r = -1.0L;
  for (int i = 1; i < 90000; ++i) {
    const double t = i * 0.001;
    const long double r = radius_on_ray(t, 100.0L, env, radio);
    if (r > best_r) {
      best_r = r;
      best = t;
    }
  }
  double lo = best - 0.001;
  double hi = best + 0.001;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (radius_on_ray(m1, 100.0L, env, radio) < radius_on_ray(m2, 100.0L, env, radio)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return 0.5 * (lo + hi);
}

/// Coverage radius at altitude h by a fine linear march plus bisection on the
/// long-double expanded loss.
inline double radius_by_march(double h, double l_th, const Environment& env, const RadioConfig& radio)
{
  if (expanded_mean_loss(h, 0.0L, env, radio) > l_th) {
    return 0.0;
  }
  double lo = 0.0;
  double step = 1.0;
  while (expanded_mean_loss(h, lo + step, env, radio) <= l_th) {
    lo += step;
    if (lo > 64.0 * step) {
      step *= 2.0;
    }
  }
  double hi = lo + step;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (expanded_mean_loss(h, mid, env, radio) <= l_th ? lo : hi) = mid;
  }
  return lo;
}

/// Weighted area π·Σ λ R² evaluated with radius_by_march (users, λ per km²).
inline double weighted_area(std::span<const QosClass> classes, double h, const Environment& env,
                            const RadioConfig& radio)
{
  double s = 0.0;
  for (const auto& c : classes) {
    const double r = radius_by_march(h, c.l_th_db, env, radio) / 1000.0;
    s += c.lambda_per_km2 * r * r;
  }
  return std::numbers::pi * s;
}

/// Direct maximization of the weighted area over [lo, hi]: 1 m scan, then
/// ternary refinement around the best scan point.
inline double argmax_weighted_area(std::span<const QosClass> classes, double lo, double hi, const Environment& env,
                                   const RadioConfig& radio)
{
  double best = lo;
  double best_v = weighted_area(classes, lo, env, radio);
  for (double h = lo; h <= hi; h += 1.0) {
    const double v = weighted_area(classes, h, env, radio);
    if (v > best_v) {
      best_v = v;
      best = h;
    }
  }
  const double v_hi = weighted_area(classes, hi, env, radio);
  if (v_hi > best_v) {
    return hi;
  }
  double a = std::max(lo, best - 1.0);
  double b = std::min(hi, best + 1.0);
  for (int it = 0; it < 60; ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (weighted_area(classes, m1, env, radio) < weighted_area(classes, m2, env, radio)) {
      a = m1;
    } else {
      b = m2;
    }
  }
  return 0.5 * (a + b);
}

} // namespace uavbs::oracle
