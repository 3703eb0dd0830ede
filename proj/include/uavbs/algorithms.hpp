#pragma once

/// \file algorithms.hpp
/// Single-UAV 3D placement algorithms.
///
///  - ES  : scans a uniform altitude grid over the optimal-altitude bracket and
///          solves the exact horizontal placement at every grid altitude.
///  - MWA : picks the altitude maximizing the density-weighted covered area
///          π·Σ λ_k R_k(h)², then solves one horizontal placement.
///  - LQ  : treats every user as belonging to the most demanding class and
///          flies at that class's optimal altitude.

#include "uavbs/channel.hpp"
#include "uavbs/errors.hpp"
#include "uavbs/numeric.hpp"
#include "uavbs/placement.hpp"
#include "uavbs/radius.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uavbs {

enum class Algorithm { es, mwa, lq };

[[nodiscard]] inline std::string_view to_string(Algorithm a) noexcept
{
  switch (a) {
    case Algorithm::es: return "es";
    case Algorithm::mwa: return "mwa";
    case Algorithm::lq: return "lq";
  }
  return "?";
}

[[nodiscard]] inline std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept
{
  if (s == "es") return Algorithm::es;
  if (s == "mwa") return Algorithm::mwa;
  if (s == "lq") return Algorithm::lq;
  return std::nullopt;
}

/// How LQ counts coverage once its center is fixed.
enum class LqMode {
  fair,  // re-evaluate with every class's true radius at the LQ altitude
  strict // keep the most demanding radius for everybody
};

struct AltitudeGrid {
  double h_lo = 0.0;
  double h_hi = 0.0;
  int n_points = 1;

  [[nodiscard]] static AltitudeGrid over(const AltitudeBracket& bracket, int n_points)
  {
    AltitudeGrid g{bracket.h_lo, bracket.h_hi, n_points};
    g.validate();
    return g;
  }

  void validate() const
  {
    if (!(h_lo > 0.0) || !(h_lo <= h_hi)) {
      throw InputError("altitude grid: require 0 < h_lo <= h_hi");
    }
    if (n_points < 1) {
      throw InputError("altitude grid: n_points must be >= 1");
    }
    if (n_points == 1 && h_lo != h_hi) {
      throw InputError("altitude grid: a single point requires h_lo == h_hi");
    }
  }

  [[nodiscard]] double step() const noexcept { return n_points > 1 ? (h_hi - h_lo) / (n_points - 1) : 0.0; }

  /// Ascending grid altitudes; both ends included exactly.
  [[nodiscard]] std::vector<double> points() const
  {
    if (h_lo == h_hi) {
      return {h_lo};
    }
    std::vector<double> hs(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
      hs[static_cast<std::size_t>(i)] = h_lo + i * step();
    }
    hs.back() = h_hi;
    return hs;
  }
};

struct AlgorithmResult {
  Algorithm algorithm = Algorithm::es;
  double h = 0.0;
  Point center;
  std::size_t covered_count = 0;
  std::map<int, std::size_t> per_class_covered;
  double runtime_s = 0.0;
  RadiusMap radii_used;
};

/// Coverage radius of every class at altitude h.
[[nodiscard]] inline RadiusMap radii_at(std::span<const QosClass> classes, double h, const Environment& env,
                                        const RadioConfig& radio)
{
  RadiusMap m;
  for (const auto& c : classes) {
    m.set(c.id, coverage_radius(h, c.l_th_db, env, radio));
  }
  return m;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline void require_classes(std::span<const QosClass> classes)
{
  if (classes.empty()) {
    throw InputError("at least one QoS class is required");
  }
}

inline AlgorithmResult make_result(Algorithm alg, double h, const PlacementSolution& sol, std::span<const User> users,
                                   std::span<const QosClass> classes, RadiusMap radii)
{
  AlgorithmResult r;
  r.algorithm = alg;
  r.h = h;
  r.center = sol.center;
  r.covered_count = sol.covered_count;
  for (const auto& c : classes) {
    r.per_class_covered[c.id] = 0;
  }
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (sol.covered[i] != 0) {
      ++r.per_class_covered[users[i].class_id];
    }
  }
  r.radii_used = std::move(radii);
  return r;
}

// Best placement at one altitude; an empty user set covers nobody.
inline PlacementSolution place_at(std::span<const User> users, const RadiusMap& radii)
{
  if (users.empty()) {
    return {};
  }
  return solve_exact(users, radii);
}

} // namespace detail

/// ES over the given altitude grid. Among equal counts the lower altitude wins.
[[nodiscard]] inline AlgorithmResult exhaustive_search(std::span<const User> users, std::span<const QosClass> classes,
                                                       const Environment& env, const RadioConfig& radio,
                                                       const AltitudeGrid& grid)
{
  const auto t0 = detail::Clock::now();
  detail::require_classes(classes);
  grid.validate();

  std::optional<AlgorithmResult> best;
  for (const double h : grid.points()) {
    RadiusMap radii = radii_at(classes, h, env, radio);
    const PlacementSolution sol = detail::place_at(users, radii);
    if (!best || sol.covered_count > best->covered_count) {
      best = detail::make_result(Algorithm::es, h, sol, users, classes, std::move(radii));
    }
  }
  best->runtime_s = detail::seconds_since(t0);
  return *best;
}

/// ES over an n-point grid spanning the classes' altitude bracket.
[[nodiscard]] inline AlgorithmResult exhaustive_search(std::span<const User> users, std::span<const QosClass> classes,
                                                       const Environment& env, const RadioConfig& radio, int n_points)
{
  const auto t0 = detail::Clock::now();
  detail::require_classes(classes);
  auto result =
    exhaustive_search(users, classes, env, radio, AltitudeGrid::over(altitude_bracket(classes, env, radio), n_points));
  result.runtime_s = detail::seconds_since(t0);
  return result;
}

/// The term X_k(h) of the stationarity condition, for a class whose radius at h is `r`.
[[nodiscard]] inline double mwa_x_term(double h, double r, const Environment& env, const RadioConfig& radio)
{
  const double A = path_loss_constants(env, radio).A;
  const double theta_deg = rad_to_deg(std::atan2(h, r));
  const double e = std::exp(-env.b * (theta_deg - env.a));
  const double k = -9.0 * std::numbers::ln10 * A * env.a * env.b / std::numbers::pi;
  return k * r * e / ((1.0 + env.a * e) * (1.0 + env.a * e)) - h;
}

/// λ_k · d(R_k²)/dh written through X_k; zero for an empty disc.
[[nodiscard]] inline double mwa_summand(double lambda, double h, double r, const Environment& env,
                                        const RadioConfig& radio)
{
  if (r <= 0.0) {
    return 0.0;
  }
  const double x = mwa_x_term(h, r, env, radio);
  return 2.0 * lambda * x * r * r / (r * r + h * h + h * x);
}

/// Σ_k λ_k·d(R_k²)/dh; zero at interior maximizers of the weighted area.
[[nodiscard]] inline double mwa_derivative(std::span<const QosClass> classes, double h, const Environment& env,
                                           const RadioConfig& radio)
{
  double sum = 0.0;
  for (const auto& c : classes) {
    sum += mwa_summand(c.lambda_per_km2, h, coverage_radius(h, c.l_th_db, env, radio), env, radio);
  }
  return sum;
}

/// Average number of covered users π·Σ λ_k R_k(h)² for uniformly spread users
/// (λ in users/km², radii converted to km).
[[nodiscard]] inline double mwa_objective(std::span<const QosClass> classes, double h, const Environment& env,
                                          const RadioConfig& radio)
{
  double sum = 0.0;
  for (const auto& c : classes) {
    const double r_km = coverage_radius(h, c.l_th_db, env, radio) / 1000.0;
    sum += c.lambda_per_km2 * r_km * r_km;
  }
  return std::numbers::pi * sum;
}

inline constexpr int kMwaScanPoints = 200;
inline constexpr double kMwaRootTolerance = 0.01; // m

/// MWA altitude: every stationary point found by a sign-change scan of the
/// derivative, plus both bracket ends, scored by the weighted area.
[[nodiscard]] inline double mwa_altitude(std::span<const QosClass> classes, const Environment& env,
                                         const RadioConfig& radio, const AltitudeBracket& bracket)
{
  if (std::none_of(classes.begin(), classes.end(), [](const QosClass& c) { return c.lambda_per_km2 > 0.0; })) {
    throw InputError("mwa_altitude: at least one class needs a positive density");
  }
  if (bracket.h_lo == bracket.h_hi) {
    return bracket.h_lo;
  }
  auto derivative = [&](double h) { return mwa_derivative(classes, h, env, radio); };

  // Scan radii move little between neighbouring points, so each solve is
  // seeded with the previous one.
  std::vector<double> warm(classes.size(), 0.0);
  auto scan_derivative = [&](double h) {
    double sum = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k) {
      warm[k] = coverage_radius_near(h, classes[k].l_th_db, warm[k], env, radio);
      sum += mwa_summand(classes[k].lambda_per_km2, h, warm[k], env, radio);
    }
    return sum;
  };

  std::vector<double> candidates{bracket.h_lo};
  const double step = (bracket.h_hi - bracket.h_lo) / (kMwaScanPoints - 1);
  double h_prev = bracket.h_lo;
  double f_prev = scan_derivative(h_prev);
  for (int i = 1; i < kMwaScanPoints; ++i) {
    const double h = (i == kMwaScanPoints - 1) ? bracket.h_hi : bracket.h_lo + i * step;
    const double f = scan_derivative(h);
    if (f == 0.0) {
      candidates.push_back(h);
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      candidates.push_back(numeric::bisect_root(derivative, h_prev, h, kMwaRootTolerance));
    }
    h_prev = h;
    f_prev = f;
  }
  candidates.push_back(bracket.h_hi);

  double best_h = candidates.front();
  double best_value = mwa_objective(classes, best_h, env, radio);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double value = mwa_objective(classes, candidates[i], env, radio);
    if (value > best_value) {
      best_value = value;
      best_h = candidates[i];
    }
  }
  return best_h;
}

[[nodiscard]] inline AlgorithmResult mwa_place(std::span<const User> users, std::span<const QosClass> classes,
                                               const Environment& env, const RadioConfig& radio)
{
  const auto t0 = detail::Clock::now();
  detail::require_classes(classes);
  const double h = mwa_altitude(classes, env, radio, altitude_bracket(classes, env, radio));
  RadiusMap radii = radii_at(classes, h, env, radio);
  const PlacementSolution sol = detail::place_at(users, radii);
  auto result = detail::make_result(Algorithm::mwa, h, sol, users, classes, std::move(radii));
  result.runtime_s = detail::seconds_since(t0);
  return result;
}

[[nodiscard]] inline AlgorithmResult lq_place(std::span<const User> users, std::span<const QosClass> classes,
                                              const Environment& env, const RadioConfig& radio,
                                              LqMode mode = LqMode::fair)
{
  const auto t0 = detail::Clock::now();
  detail::require_classes(classes);
  const auto strictest = std::min_element(classes.begin(), classes.end(), [](const QosClass& x, const QosClass& y) {
    return x.l_th_db < y.l_th_db;
  });
  const double h = optimal_pair(strictest->l_th_db, env, radio).h_star;
  const double r_strict = coverage_radius(h, strictest->l_th_db, env, radio);

  RadiusMap placement_radii;
  for (const auto& c : classes) {
    placement_radii.set(c.id, r_strict);
  }
  PlacementSolution sol = detail::place_at(users, placement_radii);

  AlgorithmResult result;
  if (mode == LqMode::fair) {
    RadiusMap true_radii = radii_at(classes, h, env, radio);
    if (!users.empty()) {
      sol = evaluate_center(sol.center.x, sol.center.y, users, true_radii);
    }
    result = detail::make_result(Algorithm::lq, h, sol, users, classes, std::move(true_radii));
  } else {
    result = detail::make_result(Algorithm::lq, h, sol, users, classes, std::move(placement_radii));
  }
  result.runtime_s = detail::seconds_since(t0);
  return result;
}

} // namespace uavbs
