#pragma once

/// \file channel.hpp
/// Probabilistic mean air-to-ground path loss and link-budget arithmetic.
///
/// The LoS probability follows the elevation-angle S-curve
///
///     P_LoS(θ) = 1 / (1 + a·exp(-b·(θ - a)))
///
/// with θ in degrees; the mean loss blends free-space loss plus the LoS/NLoS
/// excess losses weighted by P_LoS. Every public angle is in degrees; the
/// conversion from radians happens once, inside this header.

#include "uavbs/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace uavbs {

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s

[[nodiscard]] inline constexpr double rad_to_deg(double rad) noexcept
{
  return rad * 180.0 / std::numbers::pi;
}

[[nodiscard]] inline constexpr double deg_to_rad(double deg) noexcept
{
  return deg * std::numbers::pi / 180.0;
}

/// Terrain class of the A2G channel.
struct Environment {
  double a = 0.0;        // S-curve offset (dimensionless)
  double b = 0.0;        // S-curve steepness (per degree)
  double eta_los = 0.0;  // dB
  double eta_nlos = 0.0; // dB

  /// The only terrain class whose full constants ship built in.
  [[nodiscard]] static constexpr Environment urban() noexcept { return {9.61, 0.16, 1.0, 20.0}; }

  void validate() const
  {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw InputError("environment: a and b must be positive");
    }
    if (!(eta_los >= 0.0) || !(eta_nlos >= eta_los)) {
      throw InputError("environment: require eta_nlos >= eta_los >= 0");
    }
  }

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct RadioConfig {
  double fc_hz = 0.0;
  double pt_dbm = 0.0;
  double pn_dbm = 0.0;

  void validate() const
  {
    if (!(fc_hz > 0.0)) {
      throw InputError("radio: fc_hz must be positive");
    }
    if (!(pt_dbm > pn_dbm)) {
      throw InputError("radio: pt_dbm must exceed pn_dbm");
    }
  }

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

/// The two constants of the closed-form mean loss. Always recomputed from
/// their sources; never stored on their own.
struct PathLossConstants {
  double A; // eta_los - eta_nlos, <= 0
  double B; // 20·log10(4π·fc/c) + eta_nlos
};

[[nodiscard]] inline PathLossConstants path_loss_constants(const Environment& env, const RadioConfig& radio) noexcept
{
  return {env.eta_los - env.eta_nlos,
          20.0 * std::log10(4.0 * std::numbers::pi * radio.fc_hz / kSpeedOfLight) + env.eta_nlos};
}

/// Path-loss threshold (dB) at which a user with SNR requirement `gamma_th_db` is still covered.
[[nodiscard]] inline double loss_threshold(const RadioConfig& radio, double gamma_th_db) noexcept
{
  return radio.pt_dbm - radio.pn_dbm - gamma_th_db;
}

/// One QoS class. `l_th_db` is derived from the radio and `gamma_th_db`.
struct QosClass {
  int id = 0;
  double gamma_th_db = 0.0;
  double lambda_per_km2 = 0.0;
  double l_th_db = 0.0;

  friend bool operator==(const QosClass&, const QosClass&) = default;
};

[[nodiscard]] inline QosClass make_qos_class(int id, double gamma_th_db, double lambda_per_km2, const RadioConfig& radio)
{
  if (!(lambda_per_km2 >= 0.0)) {
    throw InputError("class " + std::to_string(id) + ": lambda must be >= 0");
  }
  return {id, gamma_th_db, lambda_per_km2, loss_threshold(radio, gamma_th_db)};
}

[[nodiscard]] inline double los_probability(double theta_deg, const Environment& env)
{
  if (!(theta_deg > 0.0 && theta_deg <= 90.0)) {
    throw std::domain_error("los_probability: elevation must lie in (0, 90] degrees");
  }
  return 1.0 / (1.0 + env.a * std::exp(-env.b * (theta_deg - env.a)));
}

/// Mean path loss (dB) for a UAV at altitude `h` and a user at horizontal distance `r`.
/// r = 0 is the θ = 90° limit.
namespace detail {

/// Unchecked loss with A and B already evaluated, for inner loops.
[[nodiscard]] inline double mean_path_loss(double h, double r, const Environment& env, const PathLossConstants& k) noexcept
{
  const double theta_deg = rad_to_deg(std::atan2(h, r));
  const double p_los = 1.0 / (1.0 + env.a * std::exp(-env.b * (theta_deg - env.a)));
  return k.A * p_los + 10.0 * std::log10(h * h + r * r) + k.B;
}

} // namespace detail

[[nodiscard]] inline double mean_path_loss(double h, double r, const Environment& env, const RadioConfig& radio)
{
  if (!(h > 0.0) || !(r >= 0.0)) {
    throw std::domain_error("mean_path_loss: require h > 0 and r >= 0");
  }
  return detail::mean_path_loss(h, r, env, path_loss_constants(env, radio));
}

/// Same loss written in terms of elevation angle and horizontal distance.
[[nodiscard]] inline double mean_path_loss_polar(double theta_deg, double r, const Environment& env,
                                                 const RadioConfig& radio)
{
  if (!(theta_deg > 0.0 && theta_deg < 90.0) || !(r > 0.0)) {
    throw std::domain_error("mean_path_loss_polar: require 0 < theta < 90 degrees and r > 0");
  }
  const auto [A, B] = path_loss_constants(env, radio);
  return A * los_probability(theta_deg, env) + 20.0 * std::log10(r / std::cos(deg_to_rad(theta_deg))) + B;
}

[[nodiscard]] inline double mean_snr(double h, double r, const Environment& env, const RadioConfig& radio)
{
  return (radio.pt_dbm - radio.pn_dbm) - mean_path_loss(h, r, env, radio);
}

} // namespace uavbs
