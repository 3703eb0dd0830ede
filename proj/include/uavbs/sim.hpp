#pragma once

/// \file sim.hpp
/// Monte Carlo harness: random user drops, paired algorithm runs, empirical
/// CDFs and density-ratio sweeps.
///
/// Every random draw comes from a stream keyed by (master_seed, trial_id,
/// class_id), so results do not depend on the number of worker threads or on
/// the order in which trials are executed.

#include "uavbs/algorithms.hpp"
#include "uavbs/channel.hpp"
#include "uavbs/errors.hpp"
#include "uavbs/placement.hpp"
#include "uavbs/radius.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace uavbs {

/// How many users of each class are dropped per trial.
enum class CountMode {
  poisson, // n_k ~ Poisson(λ_k · area)
  fixed    // n_k = floor(λ_k · area), last class takes the rounding remainder
};

struct Scenario {
  double width_km = 3.0;
  double height_km = 3.0;
  Environment env = Environment::urban();
  RadioConfig radio{2e9, 30.0, -120.0};
  std::vector<QosClass> classes;
  std::optional<double> rho; // λ2/λ1 for two-class scenarios
  int trials = 100;
  std::uint64_t master_seed = 0;
  int grid_points = 9;
  std::vector<Algorithm> algorithms{Algorithm::es, Algorithm::mwa, Algorithm::lq};
  CountMode count_mode = CountMode::poisson;
  LqMode lq_mode = LqMode::fair;

  [[nodiscard]] double area_km2() const noexcept { return width_km * height_km; }

  [[nodiscard]] double total_lambda() const noexcept
  {
    double t = 0.0;
    for (const auto& c : classes) {
      t += c.lambda_per_km2;
    }
    return t;
  }

  void validate() const
  {
    env.validate();
    radio.validate();
    if (!(width_km > 0.0) || !(height_km > 0.0)) {
      throw InputError("area: width_km and height_km must be positive");
    }
    if (classes.empty()) {
      throw InputError("scenario needs at least one QoS class");
    }
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (!(classes[i].lambda_per_km2 >= 0.0)) {
        throw InputError("class " + std::to_string(classes[i].id) + ": lambda must be >= 0");
      }
      for (std::size_t j = i + 1; j < classes.size(); ++j) {
        if (classes[i].id == classes[j].id) {
          throw InputError("duplicate class id " + std::to_string(classes[i].id));
        }
      }
    }
    if (trials < 1) {
      throw InputError("sim: trials must be >= 1");
    }
    if (grid_points < 1) {
      throw InputError("sim: grid_points must be >= 1");
    }
    if (algorithms.empty()) {
      throw InputError("algorithms: list must not be empty");
    }
    if (rho && classes.size() != 2) {
      throw InputError("sim: rho requires exactly two classes");
    }
    if (rho && !(*rho > 0.0)) {
      throw InputError("sim: rho must be positive");
    }
  }
};

/// Classes ordered from most to least demanding (ascending l_th).
[[nodiscard]] inline std::vector<QosClass> classes_by_demand(std::span<const QosClass> classes)
{
  std::vector<QosClass> sorted(classes.begin(), classes.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const QosClass& a, const QosClass& b) { return a.l_th_db < b.l_th_db; });
  return sorted;
}

/// Splits the scenario's total density between its two classes so that
/// λ_lenient / λ_strict = rho.
[[nodiscard]] inline Scenario with_rho(Scenario s, double rho)
{
  if (s.classes.size() != 2) {
    throw InputError("rho split requires exactly two classes");
  }
  if (!(rho > 0.0)) {
    throw InputError("rho must be positive");
  }
  const double total = s.total_lambda();
  const int strict_id = classes_by_demand(s.classes).front().id;
  const double lambda_strict = total / (1.0 + rho);
  for (auto& c : s.classes) {
    c.lambda_per_km2 = (c.id == strict_id) ? lambda_strict : total - lambda_strict;
  }
  s.rho = rho;
  return s;
}

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

} // namespace detail

/// Seed identifying one trial of one experiment.
[[nodiscard]] inline constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_id) noexcept
{
  return detail::splitmix64(detail::splitmix64(master_seed) ^ detail::splitmix64(trial_id + 0x632be59bd9b4e019ULL));
}

/// Seed of the random stream used for one class within one trial.
[[nodiscard]] inline constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t trial_id,
                                                         int class_id) noexcept
{
  return detail::splitmix64(trial_seed(master_seed, trial_id) ^
                            detail::splitmix64(static_cast<std::uint64_t>(static_cast<std::int64_t>(class_id))));
}

/// Users of one trial, class by class in scenario order, uniform over the area.
[[nodiscard]] inline std::vector<User> generate_users(const Scenario& s, std::uint64_t trial_id)
{
  const double area = s.area_km2();
  std::vector<std::size_t> counts(s.classes.size(), 0);
  if (s.count_mode == CountMode::fixed) {
    const auto total = static_cast<std::size_t>(std::llround(s.total_lambda() * area));
    std::size_t assigned = 0;
    for (std::size_t k = 0; k + 1 < s.classes.size(); ++k) {
      counts[k] = static_cast<std::size_t>(std::floor(s.classes[k].lambda_per_km2 * area));
      assigned += counts[k];
    }
    counts.back() = total > assigned ? total - assigned : 0;
  }

  std::vector<User> users;
  for (std::size_t k = 0; k < s.classes.size(); ++k) {
    const auto& cls = s.classes[k];
    std::mt19937_64 rng(stream_seed(s.master_seed, trial_id, cls.id));
    std::size_t n = counts[k];
    if (s.count_mode == CountMode::poisson) {
      const double mean = cls.lambda_per_km2 * area;
      n = mean > 0.0 ? static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng)) : 0;
    }
    std::uniform_real_distribution<double> ux(0.0, s.width_km * 1000.0);
    std::uniform_real_distribution<double> uy(0.0, s.height_km * 1000.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      users.push_back({{x, y}, cls.id});
    }
  }
  return users;
}

struct TrialRecord {
  int trial_id = 0;
  Algorithm algorithm = Algorithm::es;
  std::size_t total_users = 0;
  std::size_t covered = 0;
  std::map<int, std::size_t> per_class_covered;
  double h = 0.0;
  double x_d = 0.0;
  double y_d = 0.0;
  double runtime_s = 0.0;
  std::uint64_t seed = 0;
};

/// Everything but the wall-clock runtime.
[[nodiscard]] inline bool same_outcome(const TrialRecord& a, const TrialRecord& b) noexcept
{
  return a.trial_id == b.trial_id && a.algorithm == b.algorithm && a.total_users == b.total_users &&
         a.covered == b.covered && a.per_class_covered == b.per_class_covered && a.h == b.h && a.x_d == b.x_d &&
         a.y_d == b.y_d && a.seed == b.seed;
}

[[nodiscard]] inline AlgorithmResult run_algorithm(Algorithm alg, std::span<const User> users, const Scenario& s)
{
  switch (alg) {
    case Algorithm::es: return exhaustive_search(users, s.classes, s.env, s.radio, s.grid_points);
    case Algorithm::mwa: return mwa_place(users, s.classes, s.env, s.radio);
    case Algorithm::lq: return lq_place(users, s.classes, s.env, s.radio, s.lq_mode);
  }
  throw InputError("unknown algorithm");
}

/// Runs one trial: a single user drop shared by every requested algorithm.
[[nodiscard]] inline std::vector<TrialRecord> run_trial(const Scenario& s, int trial_id)
{
  const std::vector<User> users = generate_users(s, static_cast<std::uint64_t>(trial_id));
  std::vector<TrialRecord> out;
  out.reserve(s.algorithms.size());
  for (const Algorithm alg : s.algorithms) {
    const AlgorithmResult r = run_algorithm(alg, users, s);
    out.push_back({trial_id, alg, users.size(), r.covered_count, r.per_class_covered, r.h, r.center.x, r.center.y,
                   r.runtime_s, trial_seed(s.master_seed, static_cast<std::uint64_t>(trial_id))});
  }
  return out;
}

/// All trials, ordered by trial id then by the scenario's algorithm order.
/// `threads == 0` picks the hardware concurrency.
[[nodiscard]] inline std::vector<TrialRecord> run_trials(const Scenario& s, unsigned threads = 0)
{
  s.validate();
  // Fail fast on thresholds that can never be met instead of once per trial.
  (void)altitude_bracket(s.classes, s.env, s.radio);

  const auto n_trials = static_cast<std::size_t>(s.trials);
  std::vector<std::vector<TrialRecord>> per_trial(n_trials);
  std::vector<std::exception_ptr> errors(n_trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < n_trials; t = next++) {
      try {
        per_trial[t] = run_trial(s, static_cast<int>(t));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };

  if (threads == 0) {
    threads = std::max(1U, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
  }

  for (std::size_t t = 0; t < n_trials; ++t) {
    if (errors[t]) {
      std::ostringstream msg;
      msg << "trial " << t << " (seed 0x" << std::hex << trial_seed(s.master_seed, t) << ") failed: ";
      try {
        std::rethrow_exception(errors[t]);
      } catch (const std::exception& e) {
        msg << e.what();
      } catch (...) {
        msg << "unknown error";
      }
      throw std::runtime_error(msg.str());
    }
  }

  std::vector<TrialRecord> records;
  records.reserve(n_trials * s.algorithms.size());
  for (auto& v : per_trial) {
    records.insert(records.end(), v.begin(), v.end());
  }
  return records;
}

/// Empirical CDF: distinct sorted values and P(X <= value).
struct CdfSeries {
  std::vector<double> values;
  std::vector<double> probabilities;

  friend bool operator==(const CdfSeries&, const CdfSeries&) = default;
};

[[nodiscard]] inline CdfSeries cdf(std::span<const double> samples)
{
  if (samples.empty()) {
    throw InputError("cdf: no samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  CdfSeries out;
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
      continue;
    }
    out.values.push_back(sorted[i]);
    out.probabilities.push_back(static_cast<double>(i + 1) / n);
  }
  return out;
}

struct SampleStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t n = 0;
};

[[nodiscard]] inline SampleStats summarize(std::span<const double> xs)
{
  SampleStats s;
  s.n = xs.size();
  if (xs.empty()) {
    return s;
  }
  double sum = 0.0;
  for (const double x : xs) {
    sum += x;
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (const double x : xs) {
      ss += (x - s.mean) * (x - s.mean);
    }
    s.stderr_mean = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
  }
  return s;
}

/// Covered counts (or runtimes) of one algorithm, in trial order.
[[nodiscard]] inline std::vector<double> covered_of(std::span<const TrialRecord> records, Algorithm alg)
{
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.algorithm == alg) {
      out.push_back(static_cast<double>(r.covered));
    }
  }
  return out;
}

[[nodiscard]] inline std::vector<double> runtimes_of(std::span<const TrialRecord> records, Algorithm alg)
{
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.algorithm == alg) {
      out.push_back(r.runtime_s);
    }
  }
  return out;
}

struct SweepPoint {
  double rho = 0.0;
  Algorithm algorithm = Algorithm::es;
  double mean_covered = 0.0;
  double stderr_covered = 0.0;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

/// Mean covered users per algorithm for each density ratio, total density fixed.
[[nodiscard]] inline std::vector<SweepPoint> sweep_rho(const Scenario& s, std::span<const double> rho_values,
                                                       unsigned threads = 0)
{
  std::vector<SweepPoint> out;
  for (const double rho : rho_values) {
    const Scenario at = with_rho(s, rho);
    const auto records = run_trials(at, threads);
    for (const Algorithm alg : at.algorithms) {
      const auto stats = summarize(covered_of(records, alg));
      out.push_back({rho, alg, stats.mean, stats.stderr_mean});
    }
  }
  return out;
}

} // namespace uavbs
