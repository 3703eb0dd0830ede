// uavbs: command-line front end for single-UAV base-station placement.
//
//   uavbs radius        coverage radius and optimal altitude for one threshold
//   uavbs place         run the placement algorithms once on a user set
//   uavbs simulate      Monte Carlo trials, CDFs of coverage and runtime
//   uavbs sweep         mean coverage versus the density ratio rho
//   uavbs export-model  dump the big-M horizontal placement model
//
// Exit codes: 0 success, 2 input/validation error, 3 numerical infeasibility.

#include "uavbs/io.hpp"
#include "uavbs/model_export.hpp"
#include "uavbs/uavbs.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace uavbs;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

struct RunOptions {
  std::string scenario_path;
  std::string users_path;
  std::string out_dir = ".";
  std::vector<double> rho;
  bool strict_lq = false;
  bool fixed_count = false;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct RadiusOptions {
  std::optional<double> h;
  std::optional<double> l_th;
  std::optional<double> gamma_th;
  std::string preset = "urban";
  std::optional<double> a, b, eta_los, eta_nlos;
  double fc_hz = 2e9;
  double pt_dbm = 30.0;
  double pn_dbm = -120.0;
};

Scenario load_run_scenario(const RunOptions& opt)
{
  Scenario s = io::load_scenario(opt.scenario_path);
  if (opt.strict_lq) {
    s.lq_mode = LqMode::strict;
  }
  if (opt.fixed_count) {
    s.count_mode = CountMode::fixed;
  }
  if (opt.seed) {
    s.master_seed = *opt.seed;
  }
  return s;
}

std::ofstream open_out(const RunOptions& opt, const std::string& name)
{
  fs::create_directories(opt.out_dir);
  const fs::path path = fs::path(opt.out_dir) / name;
  std::ofstream os(path);
  if (!os) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  return os;
}

void write_document(const RunOptions& opt, const io::ResultDocument& doc)
{
  auto os = open_out(opt, "result.json");
  os << io::to_json(doc).dump(2) << '\n';
}

void print_summary(const std::vector<io::AlgorithmSummary>& summary)
{
  std::cout << std::left << std::setw(6) << "alg" << std::right << std::setw(14) << "mean_covered" << std::setw(12)
            << "stderr" << std::setw(16) << "mean_runtime_s" << '\n';
  for (const auto& s : summary) {
    std::cout << std::left << std::setw(6) << to_string(s.algorithm) << std::right << std::fixed << std::setprecision(3)
              << std::setw(14) << s.mean_covered << std::setw(12) << s.stderr_covered << std::setprecision(6)
              << std::setw(16) << s.mean_runtime_s << '\n';
  }
}

int cmd_radius(const RadiusOptions& opt)
{
  Environment env = Environment::urban();
  if (opt.a || opt.b || opt.eta_los || opt.eta_nlos) {
    if (!(opt.a && opt.b && opt.eta_los && opt.eta_nlos)) {
      throw InputError("--a, --b, --eta-los-db and --eta-nlos-db must be given together");
    }
    env = {*opt.a, *opt.b, *opt.eta_los, *opt.eta_nlos};
  } else if (opt.preset != "urban") {
    throw InputError("--preset: unknown preset '" + opt.preset + "'");
  }
  env.validate();
  const RadioConfig radio{opt.fc_hz, opt.pt_dbm, opt.pn_dbm};
  radio.validate();

  if (opt.l_th.has_value() == opt.gamma_th.has_value()) {
    throw InputError("exactly one of --l-th-db and --gamma-th-db is required");
  }
  const double l_th = opt.l_th ? *opt.l_th : loss_threshold(radio, *opt.gamma_th);
  const OptimalPoint best = optimal_pair(l_th, env, radio);

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "l_th_db " << l_th << '\n'
            << "theta_star_deg " << best.theta_star << '\n'
            << "h_star_m " << best.h_star << '\n'
            << "r_star_m " << best.r_star << '\n';
  if (opt.h) {
    std::cout << "h_m " << *opt.h << '\n' << "radius_m " << coverage_radius(*opt.h, l_th, env, radio) << '\n';
  }
  return 0;
}

int cmd_place(const RunOptions& opt)
{
  Scenario s = load_run_scenario(opt);
  std::vector<User> users;
  if (!opt.users_path.empty()) {
    users = io::load_users_csv(opt.users_path);
  } else {
    users = generate_users(s, 0);
    auto os = open_out(opt, "users.csv");
    io::write_users_csv(os, users);
  }
  for (const auto& u : users) {
    if (std::none_of(s.classes.begin(), s.classes.end(), [&](const QosClass& c) { return c.id == u.class_id; })) {
      throw InputError("users: class_id " + std::to_string(u.class_id) + " is not defined in the scenario");
    }
  }

  io::ResultDocument doc;
  doc.command = "place";
  doc.scenario = s;
  for (const Algorithm alg : s.algorithms) {
    const AlgorithmResult r = run_algorithm(alg, users, s);
    doc.trials.push_back({0, alg, users.size(), r.covered_count, r.per_class_covered, r.h, r.center.x, r.center.y,
                          r.runtime_s, trial_seed(s.master_seed, 0)});
    std::cout << to_string(alg) << ": covered " << r.covered_count << "/" << users.size() << " at (" << std::fixed
              << std::setprecision(2) << r.center.x << ", " << r.center.y << ", " << r.h << ") m\n";
  }
  doc.summary = io::summarize_records(doc.trials, s.algorithms);
  write_document(opt, doc);
  return 0;
}

int cmd_simulate(const RunOptions& opt)
{
  const Scenario s = load_run_scenario(opt);
  io::ResultDocument doc;
  doc.command = "simulate";
  doc.scenario = s;
  doc.trials = run_trials(s, opt.threads);
  doc.summary = io::summarize_records(doc.trials, s.algorithms);
  for (const Algorithm alg : s.algorithms) {
    const std::string name(to_string(alg));
    doc.cdf_covered[name] = cdf(covered_of(doc.trials, alg));
    doc.cdf_runtime[name] = cdf(runtimes_of(doc.trials, alg));
    auto cov = open_out(opt, "cdf_covered_" + name + ".csv");
    io::write_cdf_csv(cov, doc.cdf_covered[name]);
    auto rt = open_out(opt, "cdf_runtime_" + name + ".csv");
    io::write_cdf_csv(rt, doc.cdf_runtime[name]);
  }
  write_document(opt, doc);
  print_summary(doc.summary);
  return 0;
}

int cmd_sweep(const RunOptions& opt)
{
  const Scenario s = load_run_scenario(opt);
  if (opt.rho.empty()) {
    throw InputError("--rho: at least one value is required");
  }
  io::ResultDocument doc;
  doc.command = "sweep";
  doc.scenario = s;
  doc.sweep = sweep_rho(s, opt.rho, opt.threads);
  auto os = open_out(opt, "sweep.csv");
  io::write_sweep_csv(os, doc.sweep);
  write_document(opt, doc);
  io::write_sweep_csv(std::cout, doc.sweep);
  return 0;
}

int cmd_export_model(const RunOptions& opt, double h, const std::string& model_path)
{
  const Scenario s = load_run_scenario(opt);
  const std::vector<User> users =
    opt.users_path.empty() ? generate_users(s, 0) : io::load_users_csv(opt.users_path);
  const RadiusMap radii = radii_at(s.classes, h, s.env, s.radio);
  const Bounds bounds{0.0, s.width_km * 1000.0, 0.0, s.height_km * 1000.0};
  if (model_path.empty()) {
    write_model(std::cout, users, radii, bounds);
  } else {
    std::ofstream os(model_path);
    if (!os) {
      throw InputError("cannot write '" + model_path + "'");
    }
    write_model(os, users, radii, bounds);
  }
  return 0;
}

void add_run_options(CLI::App* cmd, RunOptions& opt, bool with_users)
{
  cmd->add_option("--scenario", opt.scenario_path, "Scenario INI file")->required();
  if (with_users) {
    cmd->add_option("--users", opt.users_path, "Users CSV (x_m,y_m,class_id); synthetic drop if omitted");
  }
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_flag("--strict-lq", opt.strict_lq, "Count LQ coverage with the most demanding radius for all users");
  cmd->add_flag("--fixed-count", opt.fixed_count, "Fixed per-class user counts instead of Poisson draws");
  cmd->add_option("--seed", opt.seed, "Override the scenario master seed");
  cmd->add_option("--threads", opt.threads, "Worker threads for trials (0 = all cores)");
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Single-UAV base-station placement for users with different QoS requirements"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  RadiusOptions radius_opt;
  auto* radius = app.add_subcommand("radius", "Coverage radius and optimal altitude for one threshold");
  radius->add_option("--h", radius_opt.h, "Altitude (m) at which to evaluate the coverage radius");
  radius->add_option("--l-th-db", radius_opt.l_th, "Path-loss threshold (dB)");
  radius->add_option("--gamma-th-db", radius_opt.gamma_th, "SNR threshold (dB)");
  radius->add_option("--preset", radius_opt.preset, "Environment preset (urban)");
  radius->add_option("--a", radius_opt.a, "S-curve parameter a");
  radius->add_option("--b", radius_opt.b, "S-curve parameter b");
  radius->add_option("--eta-los-db", radius_opt.eta_los, "LoS excess loss (dB)");
  radius->add_option("--eta-nlos-db", radius_opt.eta_nlos, "NLoS excess loss (dB)");
  radius->add_option("--fc-hz", radius_opt.fc_hz, "Carrier frequency (Hz)");
  radius->add_option("--pt-dbm", radius_opt.pt_dbm, "Transmit power (dBm)");
  radius->add_option("--pn-dbm", radius_opt.pn_dbm, "Noise power (dBm)");

  RunOptions place_opt;
  auto* place = app.add_subcommand("place", "Run the placement algorithms once");
  add_run_options(place, place_opt, true);

  RunOptions sim_opt;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo trials with coverage and runtime CDFs");
  add_run_options(simulate, sim_opt, false);

  RunOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Mean coverage versus density ratio");
  add_run_options(sweep, sweep_opt, false);
  sweep->add_option("--rho", sweep_opt.rho, "Comma-separated density ratios")->delimiter(',')->required();

  RunOptions export_opt;
  double export_h = 0.0;
  std::string model_path;
  auto* exporter = app.add_subcommand("export-model", "Write the big-M placement model at one altitude");
  add_run_options(exporter, export_opt, true);
  exporter->add_option("--h", export_h, "Altitude (m)")->required();
  exporter->add_option("--model", model_path, "Model output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*radius) return cmd_radius(radius_opt);
    if (*place) return cmd_place(place_opt);
    if (*simulate) return cmd_simulate(sim_opt);
    if (*sweep) return cmd_sweep(sweep_opt);
    if (*exporter) return cmd_export_model(export_opt, export_h, model_path);
  } catch (const InfeasibleThreshold& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
