#pragma once

// Plain-text dump of the big-M horizontal placement model, for checking
// solve_exact against an external mixed-integer conic solver.
//
//   # comment lines
//   var x_d <lo> <hi>
//   var y_d <lo> <hi>
//   var u binary <n_users>
//   objective maximize sum u
//   dist <user_id> <x_m> <y_m> <radius_m> <M>      (one per user)
//
// Each `dist` line encodes  ||(x, y) - (x_d, y_d)|| <= radius + M·(1 - u_id).

#include "uavbs/placement.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>

namespace uavbs {

/// Smallest constant that makes every relaxed constraint vacuous when the
/// center is restricted to `bounds`.
[[nodiscard]] inline double big_m(const Bounds& bounds, const RadiusMap& radii) noexcept
{
  return std::hypot(bounds.x_max - bounds.x_min, bounds.y_max - bounds.y_min) + radii.max_radius();
}

inline void write_model(std::ostream& os, std::span<const User> users, const RadiusMap& radii, const Bounds& bounds)
{
  const double m = big_m(bounds, radii);
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "# uavbs placement model v1\n"
     << "# maximize sum_i u_i s.t. dist(user_i, center) <= radius_i + M (1 - u_i)\n"
     << "var x_d " << bounds.x_min << ' ' << bounds.x_max << '\n'
     << "var y_d " << bounds.y_min << ' ' << bounds.y_max << '\n'
     << "var u binary " << users.size() << '\n'
     << "objective maximize sum u\n";
  for (std::size_t i = 0; i < users.size(); ++i) {
    os << "dist " << i << ' ' << users[i].pos.x << ' ' << users[i].pos.y << ' ' << radii.at(users[i].class_id) << ' '
       << m << '\n';
  }
  os.precision(old_precision);
}

} // namespace uavbs
