#pragma once

#include <stdexcept>
#include <string>

namespace uavbs {

/// Malformed or out-of-range user input (bad scenario key, unknown class id, ...).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A path-loss threshold that admits no positive coverage radius.
class InfeasibleThreshold : public std::runtime_error {
public:
  explicit InfeasibleThreshold(double l_th_db)
    : std::runtime_error("infeasible threshold: l_th = " + std::to_string(l_th_db) + " dB")
    , l_th_db_(l_th_db)
  {}

  [[nodiscard]] double l_th_db() const noexcept { return l_th_db_; }

private:
  double l_th_db_;
};

} // namespace uavbs
