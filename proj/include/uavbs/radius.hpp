#pragma once

/// \file radius.hpp
/// Coverage radius R(h) for a loss threshold, the environment's optimal
/// elevation angle, and the altitude bracket that must contain an optimal
/// single-UAV altitude for a set of QoS classes.

#include "uavbs/channel.hpp"
#include "uavbs/errors.hpp"
#include "uavbs/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace uavbs {

inline constexpr double kRadiusTolerance = 1e-3;    // m
inline constexpr double kAngleTolerance = 1e-4;     // degrees
inline constexpr double kMaxCoverageRadius = 1e7;   // m, cap of the doubling search

struct CoverageDisc {
  int class_id = 0;
  double radius = 0.0; // m
};

struct OptimalPoint {
  double theta_star = 0.0; // degrees
  double h_star = 0.0;     // m
  double r_star = 0.0;     // m
};

struct AltitudeBracket {
  double h_lo = 0.0; // optimal altitude of the most demanding class
  double h_hi = 0.0; // optimal altitude of the least demanding class

  [[nodiscard]] bool contains(double h) const noexcept { return h >= h_lo && h <= h_hi; }
};

/// Largest horizontal distance r with mean_path_loss(h, r) <= l_th, or 0 when
/// even the user directly below the UAV is out of budget.
[[nodiscard]] inline double coverage_radius(double h, double l_th_db, const Environment& env,
                                            const RadioConfig& radio, double tol = kRadiusTolerance)
{
  if (!(h > 0.0)) {
    throw std::domain_error("coverage_radius: altitude must be positive");
  }
  const PathLossConstants k = path_loss_constants(env, radio);
  auto inside = [&](double r) { return detail::mean_path_loss(h, r, env, k) <= l_th_db; };
  if (!inside(0.0)) {
    return 0.0;
  }
  // L grows without bound in r, so doubling finds an outside point.
  double r_lo = 0.0;
  double r_hi = h;
  while (inside(r_hi)) {
    if (r_hi >= kMaxCoverageRadius) {
      return kMaxCoverageRadius;
    }
    r_lo = r_hi;
    r_hi = std::min(2.0 * r_hi, kMaxCoverageRadius);
  }
  return numeric::bisect_boundary(inside, r_lo, r_hi, tol);
}

/// coverage_radius seeded with a nearby radius, for sweeps over slowly varying
/// h. Brackets [guess - w, guess + w] with w doubling from 1 m; falls back to
/// the cold start once the window is no longer local. Same tolerance.
[[nodiscard]] inline double coverage_radius_near(double h, double l_th_db, double guess, const Environment& env,
                                                 const RadioConfig& radio, double tol = kRadiusTolerance)
{
  if (!(h > 0.0)) {
    throw std::domain_error("coverage_radius: altitude must be positive");
  }
  if (!(guess > 0.0)) {
    return coverage_radius(h, l_th_db, env, radio, tol);
  }
  const PathLossConstants k = path_loss_constants(env, radio);
  auto inside = [&](double r) { return detail::mean_path_loss(h, r, env, k) <= l_th_db; };
  for (double w = 1.0; w < 0.25 * guess; w *= 2.0) {
    const double lo = guess - w;
    const double hi = guess + w;
    if (inside(lo) && !inside(hi)) {
      return numeric::bisect_boundary(inside, lo, hi, tol);
    }
  }
  return coverage_radius(h, l_th_db, env, radio, tol);
}

/// Elevation angle (degrees) maximizing the coverage radius. Depends on the
/// terrain constants only, not on the threshold or the carrier.
[[nodiscard]] inline double optimal_elevation(const Environment& env, double tol = kAngleTolerance)
{
  const double a_norm = env.eta_los - env.eta_nlos;
  auto objective = [&](double theta_deg) {
    const double p_los = 1.0 / (1.0 + env.a * std::exp(-env.b * (theta_deg - env.a)));
    return 20.0 * std::log10(std::cos(deg_to_rad(theta_deg))) - a_norm * p_los;
  };
  // The objective can have a shallow local peak at low angles (high-rise
  // constants peak near 6.7° and again near 75.5°), so locate the global
  // peak on a coarse scan first and refine only around it.
  constexpr int kScan = 900;
  constexpr double kLo = 1e-9;
  constexpr double kHi = 90.0 - 1e-9;
  const double step = (kHi - kLo) / kScan;
  int best = 0;
  double best_value = objective(kLo);
  for (int i = 1; i <= kScan; ++i) {
    const double v = objective(kLo + i * step);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = kLo + std::max(best - 1, 0) * step;
  const double hi = std::min(kLo + (best + 1) * step, kHi);
  return numeric::golden_section_maximize(objective, lo, hi, tol);
}

/// Altitude and radius of the largest coverage disc for one threshold.
/// Throws InfeasibleThreshold when l_th is not a positive finite loss budget.
[[nodiscard]] inline OptimalPoint optimal_pair(double l_th_db, const Environment& env, const RadioConfig& radio)
{
  if (!std::isfinite(l_th_db) || l_th_db <= 0.0) {
    throw InfeasibleThreshold(l_th_db);
  }
  const double theta = optimal_elevation(env);
  const auto [A, B] = path_loss_constants(env, radio);
  // 20·log10(r / cos θ*) = l_th - B - A·P_LoS(θ*)
  const double slant = std::pow(10.0, (l_th_db - B - A * los_probability(theta, env)) / 20.0);
  const double r = slant * std::cos(deg_to_rad(theta));
  if (!std::isfinite(r) || !(r > 0.0)) {
    throw InfeasibleThreshold(l_th_db);
  }
  return {theta, r * std::tan(deg_to_rad(theta)), r};
}

/// Closed altitude interval [h*(min l_th), h*(max l_th)].
[[nodiscard]] inline AltitudeBracket altitude_bracket(std::span<const QosClass> classes, const Environment& env,
                                                      const RadioConfig& radio)
{
  if (classes.empty()) {
    throw InputError("altitude_bracket: at least one QoS class is required");
  }
  const auto [lo, hi] = std::minmax_element(classes.begin(), classes.end(),
                                            [](const QosClass& x, const QosClass& y) { return x.l_th_db < y.l_th_db; });
  return {optimal_pair(lo->l_th_db, env, radio).h_star, optimal_pair(hi->l_th_db, env, radio).h_star};
}

} // namespace uavbs
