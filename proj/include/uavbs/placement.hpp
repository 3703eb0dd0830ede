#pragma once

/// \file placement.hpp
/// Horizontal placement of one UAV given per-class coverage radii.
///
/// solve_exact enumerates the classic maximal-covering candidate set: every
/// user position and every pairwise intersection of the users' boundary
/// circles. Any optimal center can be slid until it either sits on two
/// boundaries or its covered set is a single disc, so the candidate set
/// always contains a point achieving the optimum.

#include "uavbs/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <span>
#include <vector>

namespace uavbs {

/// Relative slack of the closed-disc membership test.
inline constexpr double kGeomSlack = 1e-6;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct User {
  Point pos;
  int class_id = 0;

  friend bool operator==(const User&, const User&) = default;
};

/// class id -> coverage radius (m) at one altitude.
class RadiusMap {
public:
  RadiusMap() = default;

  void set(int class_id, double radius)
  {
    if (!(radius >= 0.0) || !std::isfinite(radius)) {
      throw InputError("radius for class " + std::to_string(class_id) + " must be finite and >= 0");
    }
    radii_[class_id] = radius;
  }

  [[nodiscard]] double at(int class_id) const
  {
    const auto it = radii_.find(class_id);
    if (it == radii_.end()) {
      throw InputError("unknown class id " + std::to_string(class_id));
    }
    return it->second;
  }

  [[nodiscard]] double max_radius() const noexcept
  {
    double m = 0.0;
    for (const auto& [id, r] : radii_) {
      m = std::max(m, r);
    }
    return m;
  }

  [[nodiscard]] const std::map<int, double>& entries() const noexcept { return radii_; }

  friend bool operator==(const RadiusMap&, const RadiusMap&) = default;

private:
  std::map<int, double> radii_;
};

struct PlacementSolution {
  Point center;
  std::vector<std::uint8_t> covered; // u_i per user, input order
  std::size_t covered_count = 0;
};

struct Bounds {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

namespace detail {

struct CoverageTest {
  std::vector<double> ux, uy, r2;

  CoverageTest(std::span<const User> users, const RadiusMap& radii)
  {
    ux.reserve(users.size());
    uy.reserve(users.size());
    r2.reserve(users.size());
    for (const auto& u : users) {
      const double r = radii.at(u.class_id) * (1.0 + kGeomSlack);
      ux.push_back(u.pos.x);
      uy.push_back(u.pos.y);
      r2.push_back(r * r);
    }
  }

  [[nodiscard]] std::size_t count(Point c) const noexcept
  {
    std::size_t n = 0;
    for (std::size_t i = 0; i < ux.size(); ++i) {
      const double dx = ux[i] - c.x;
      const double dy = uy[i] - c.y;
      n += (dx * dx + dy * dy <= r2[i]) ? 1U : 0U;
    }
    return n;
  }

  [[nodiscard]] PlacementSolution solution(Point c) const
  {
    PlacementSolution s{c, std::vector<std::uint8_t>(ux.size(), 0), 0};
    for (std::size_t i = 0; i < ux.size(); ++i) {
      const double dx = ux[i] - c.x;
      const double dy = uy[i] - c.y;
      if (dx * dx + dy * dy <= r2[i]) {
        s.covered[i] = 1;
        ++s.covered_count;
      }
    }
    return s;
  }
};

} // namespace detail

/// Coverage flags of all users for a UAV centered at (x, y).
[[nodiscard]] inline PlacementSolution evaluate_center(double x, double y, std::span<const User> users,
                                                       const RadiusMap& radii)
{
  return detail::CoverageTest(users, radii).solution({x, y});
}

struct CircleIntersection {
  std::array<Point, 2> points{};
  int count = 0;
};

/// Intersection points of two circles. Concentric, disjoint and nested
/// circles give none; tangent circles give one.
[[nodiscard]] inline CircleIntersection circle_intersections(Point c1, double r1, Point c2, double r2) noexcept
{
  CircleIntersection out;
  const double dx = c2.x - c1.x;
  const double dy = c2.y - c1.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 == 0.0) {
    return out;
  }
  const double d = std::sqrt(d2);
  if (d > r1 + r2 || d < std::abs(r1 - r2)) {
    return out;
  }
  const double along = (r1 * r1 - r2 * r2 + d2) / (2.0 * d);
  const double h2 = r1 * r1 - along * along;
  const Point base{c1.x + along * dx / d, c1.y + along * dy / d};
  if (h2 <= 0.0) {
    out.points[0] = base;
    out.count = 1;
    return out;
  }
  const double h = std::sqrt(h2);
  const double ox = -dy * h / d;
  const double oy = dx * h / d;
  out.points[0] = {base.x + ox, base.y + oy};
  out.points[1] = {base.x - ox, base.y - oy};
  out.count = 2;
  return out;
}

/// Center maximizing the number of covered users. Ties go to the
/// lexicographically smallest (x, y).
[[nodiscard]] inline PlacementSolution solve_exact(std::span<const User> users, const RadiusMap& radii)
{
  if (users.empty()) {
    throw InputError("solve_exact: user set is empty");
  }
  const detail::CoverageTest test(users, radii);

  Point best{};
  std::size_t best_count = 0;
  bool have_best = false;
  auto consider = [&](Point c) {
    const std::size_t n = test.count(c);
    if (!have_best || n > best_count || (n == best_count && c < best)) {
      best = c;
      best_count = n;
      have_best = true;
    }
  };

  std::vector<double> radius(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    radius[i] = radii.at(users[i].class_id);
    consider(users[i].pos);
  }
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      const auto hit = circle_intersections(users[i].pos, radius[i], users[j].pos, radius[j]);
      for (int k = 0; k < hit.count; ++k) {
        consider(hit.points[k]);
      }
    }
  }
  return test.solution(best);
}

/// Brute-force scoring of every grid point in `bounds`. Test oracle only:
/// its optimum never exceeds solve_exact's.
[[nodiscard]] inline PlacementSolution grid_oracle(std::span<const User> users, const RadiusMap& radii, double step,
                                                   const Bounds& bounds)
{
  if (!(step > 0.0)) {
    throw InputError("grid_oracle: step must be positive");
  }
  const detail::CoverageTest test(users, radii);
  const auto nx = static_cast<std::size_t>(std::floor((bounds.x_max - bounds.x_min) / step)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((bounds.y_max - bounds.y_min) / step)) + 1;

  Point best{bounds.x_min, bounds.y_min};
  std::size_t best_count = test.count(best);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double x = bounds.x_min + static_cast<double>(ix) * step;
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const Point c{x, bounds.y_min + static_cast<double>(iy) * step};
      const std::size_t n = test.count(c);
      if (n > best_count) {
        best = c;
        best_count = n;
      }
    }
  }
  return test.solution(best);
}

} // namespace uavbs
