#pragma once

/// \file io.hpp
/// File formats used by the command-line tool.
///
/// Scenario files are INI documents (comments on their own line, `#` or `;`):
///
///     [area]         width_km, height_km
///     [radio]        fc_hz, pt_dbm, pn_dbm
///     [environment]  preset = urban   |   a, b, eta_los_db, eta_nlos_db
///     [class.<id>]   gamma_th_db, lambda_per_km2        (one section per class)
///     [sim]          trials, master_seed, grid_points, rho   (all optional)
///     [algorithms]   list = es, mwa, lq
///
/// Users files are CSV with header `x_m,y_m,class_id`. Plot series are CSV
/// (`value,probability` and `rho,algorithm,mean_covered,stderr`). Run results
/// are a JSON document carrying a full echo of the scenario.

#include "uavbs/algorithms.hpp"
#include "uavbs/channel.hpp"
#include "uavbs/errors.hpp"
#include "uavbs/placement.hpp"
#include "uavbs/sim.hpp"

#include <json.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace uavbs::io {

namespace detail {

inline std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out)
{
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && !text.empty();
}

template <typename T>
T number_at(const boost::property_tree::ptree& section, const std::string& section_name, const std::string& key)
{
  const auto it = section.find(key);
  if (it == section.not_found()) {
    throw InputError("[" + section_name + "] missing key '" + key + "'");
  }
  T value{};
  if (!parse_number(it->second.data(), value)) {
    throw InputError("[" + section_name + "] key '" + key + "': cannot parse '" + it->second.data() + "'");
  }
  return value;
}

inline void allow_only(const boost::property_tree::ptree& section, const std::string& section_name,
                       std::initializer_list<std::string_view> keys)
{
  for (const auto& [key, value] : section) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InputError("[" + section_name + "] unknown key '" + key + "'");
    }
  }
}

inline std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::vector<std::string> split(std::string_view line, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

inline std::string_view count_mode_name(CountMode m) { return m == CountMode::poisson ? "poisson" : "fixed"; }
inline std::string_view lq_mode_name(LqMode m) { return m == LqMode::fair ? "fair" : "strict"; }

} // namespace detail

/// Parses a scenario document. Every error names the offending section or key.
[[nodiscard]] inline Scenario parse_scenario(std::istream& in)
{
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }

  Scenario s;
  s.classes.clear();
  bool have_area = false;
  bool have_radio = false;
  bool have_env = false;
  bool have_algorithms = false;
  std::vector<std::pair<int, const pt::ptree*>> class_sections;
  const pt::ptree* sim = nullptr;

  for (const auto& [name, section] : root) {
    if (!section.data().empty()) {
      throw InputError("scenario: key '" + name + "' outside of any section");
    }
    if (name == "area") {
      detail::allow_only(section, name, {"width_km", "height_km"});
      s.width_km = detail::number_at<double>(section, name, "width_km");
      s.height_km = detail::number_at<double>(section, name, "height_km");
      have_area = true;
    } else if (name == "radio") {
      detail::allow_only(section, name, {"fc_hz", "pt_dbm", "pn_dbm"});
      s.radio = {detail::number_at<double>(section, name, "fc_hz"), detail::number_at<double>(section, name, "pt_dbm"),
                 detail::number_at<double>(section, name, "pn_dbm")};
      have_radio = true;
    } else if (name == "environment") {
      detail::allow_only(section, name, {"preset", "a", "b", "eta_los_db", "eta_nlos_db"});
      if (const auto it = section.find("preset"); it != section.not_found()) {
        if (section.size() != 1) {
          throw InputError("[environment] 'preset' cannot be combined with explicit constants");
        }
        if (detail::trim(it->second.data()) != "urban") {
          throw InputError("[environment] key 'preset': unknown preset '" + it->second.data() + "'");
        }
        s.env = Environment::urban();
      } else {
        s.env = {detail::number_at<double>(section, name, "a"), detail::number_at<double>(section, name, "b"),
                 detail::number_at<double>(section, name, "eta_los_db"),
                 detail::number_at<double>(section, name, "eta_nlos_db")};
      }
      have_env = true;
    } else if (name.rfind("class.", 0) == 0) {
      int id = 0;
      if (!detail::parse_number(std::string_view(name).substr(6), id)) {
        throw InputError("scenario: bad class section name '" + name + "'");
      }
      detail::allow_only(section, name, {"gamma_th_db", "lambda_per_km2"});
      class_sections.emplace_back(id, &section);
    } else if (name == "sim") {
      detail::allow_only(section, name, {"trials", "master_seed", "grid_points", "rho"});
      sim = &section;
    } else if (name == "algorithms") {
      detail::allow_only(section, name, {"list"});
      const auto it = section.find("list");
      if (it == section.not_found()) {
        throw InputError("[algorithms] missing key 'list'");
      }
      s.algorithms.clear();
      for (const auto& tok : detail::split(it->second.data(), ',')) {
        const auto alg = parse_algorithm(tok);
        if (!alg) {
          throw InputError("[algorithms] key 'list': unknown algorithm '" + tok + "'");
        }
        s.algorithms.push_back(*alg);
      }
      have_algorithms = true;
    } else {
      throw InputError("scenario: unknown section [" + name + "]");
    }
  }

  if (!have_area) throw InputError("scenario: missing section [area]");
  if (!have_radio) throw InputError("scenario: missing section [radio]");
  if (!have_env) throw InputError("scenario: missing section [environment]");
  if (!have_algorithms) throw InputError("scenario: missing section [algorithms]");
  if (class_sections.empty()) throw InputError("scenario: missing section [class.<id>]");

  for (const auto& [id, section] : class_sections) {
    const std::string name = "class." + std::to_string(id);
    s.classes.push_back(make_qos_class(id, detail::number_at<double>(*section, name, "gamma_th_db"),
                                       detail::number_at<double>(*section, name, "lambda_per_km2"), s.radio));
  }

  if (sim != nullptr) {
    if (sim->find("trials") != sim->not_found()) s.trials = detail::number_at<int>(*sim, "sim", "trials");
    if (sim->find("master_seed") != sim->not_found())
      s.master_seed = detail::number_at<std::uint64_t>(*sim, "sim", "master_seed");
    if (sim->find("grid_points") != sim->not_found())
      s.grid_points = detail::number_at<int>(*sim, "sim", "grid_points");
    if (sim->find("rho") != sim->not_found()) s.rho = detail::number_at<double>(*sim, "sim", "rho");
  }

  s.validate();
  if (s.rho) {
    s = with_rho(s, *s.rho);
  }
  return s;
}

[[nodiscard]] inline Scenario load_scenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open scenario file '" + path + "'");
  }
  return parse_scenario(in);
}

/// Users CSV (`x_m,y_m,class_id`). Errors carry the 1-based line number.
[[nodiscard]] inline std::vector<User> parse_users_csv(std::istream& in)
{
  std::vector<User> users;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) {
      continue;
    }
    if (!header_seen) {
      if (text != "x_m,y_m,class_id") {
        throw InputError("users line " + std::to_string(line_no) + ": expected header 'x_m,y_m,class_id'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(text, ',');
    User u;
    if (fields.size() != 3 || !detail::parse_number(fields[0], u.pos.x) || !detail::parse_number(fields[1], u.pos.y) ||
        !detail::parse_number(fields[2], u.class_id) || !std::isfinite(u.pos.x) || !std::isfinite(u.pos.y)) {
      throw InputError("users line " + std::to_string(line_no) + ": malformed row '" + std::string(text) + "'");
    }
    users.push_back(u);
  }
  if (!header_seen) {
    throw InputError("users: empty file");
  }
  return users;
}

[[nodiscard]] inline std::vector<User> load_users_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open users file '" + path + "'");
  }
  return parse_users_csv(in);
}

inline void write_users_csv(std::ostream& os, std::span<const User> users)
{
  os << "x_m,y_m,class_id\n";
  for (const auto& u : users) {
    os << detail::format_double(u.pos.x) << ',' << detail::format_double(u.pos.y) << ',' << u.class_id << '\n';
  }
}

inline void write_cdf_csv(std::ostream& os, const CdfSeries& series)
{
  os << "value,probability\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    os << detail::format_double(series.values[i]) << ',' << detail::format_double(series.probabilities[i]) << '\n';
  }
}

[[nodiscard]] inline CdfSeries read_cdf_csv(std::istream& in)
{
  CdfSeries out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (detail::trim(line) != "value,probability") {
        throw InputError("cdf csv: bad header");
      }
      continue;
    }
    const auto f = detail::split(line, ',');
    double v = 0.0;
    double p = 0.0;
    if (f.size() != 2 || !detail::parse_number(f[0], v) || !detail::parse_number(f[1], p)) {
      throw InputError("cdf csv line " + std::to_string(line_no) + ": malformed row");
    }
    out.values.push_back(v);
    out.probabilities.push_back(p);
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points)
{
  os << "rho,algorithm,mean_covered,stderr\n";
  for (const auto& p : points) {
    os << detail::format_double(p.rho) << ',' << to_string(p.algorithm) << ',' << detail::format_double(p.mean_covered)
       << ',' << detail::format_double(p.stderr_covered) << '\n';
  }
}

[[nodiscard]] inline std::vector<SweepPoint> read_sweep_csv(std::istream& in)
{
  std::vector<SweepPoint> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (detail::trim(line) != "rho,algorithm,mean_covered,stderr") {
        throw InputError("sweep csv: bad header");
      }
      continue;
    }
    const auto f = detail::split(line, ',');
    SweepPoint p;
    const auto alg = f.size() == 4 ? parse_algorithm(f[1]) : std::nullopt;
    if (!alg || !detail::parse_number(f[0], p.rho) || !detail::parse_number(f[2], p.mean_covered) ||
        !detail::parse_number(f[3], p.stderr_covered)) {
      throw InputError("sweep csv line " + std::to_string(line_no) + ": malformed row");
    }
    p.algorithm = *alg;
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Result document

inline constexpr int kResultSchemaVersion = 1;

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::es;
  double mean_covered = 0.0;
  double stderr_covered = 0.0;
  double mean_runtime_s = 0.0;

  friend bool operator==(const AlgorithmSummary&, const AlgorithmSummary&) = default;
};

struct ResultDocument {
  int schema_version = kResultSchemaVersion;
  std::string command;
  Scenario scenario;
  std::vector<AlgorithmSummary> summary;
  std::vector<TrialRecord> trials;
  std::map<std::string, CdfSeries> cdf_covered; // keyed by algorithm name
  std::map<std::string, CdfSeries> cdf_runtime;
  std::vector<SweepPoint> sweep;
};

[[nodiscard]] inline std::vector<AlgorithmSummary> summarize_records(std::span<const TrialRecord> records,
                                                                     std::span<const Algorithm> algorithms)
{
  std::vector<AlgorithmSummary> out;
  for (const Algorithm alg : algorithms) {
    const auto covered = summarize(covered_of(records, alg));
    const auto runtime = summarize(runtimes_of(records, alg));
    out.push_back({alg, covered.mean, covered.stderr_mean, runtime.mean});
  }
  return out;
}

using nlohmann::json;

namespace detail {

inline json cdf_to_json(const CdfSeries& c) { return {{"value", c.values}, {"probability", c.probabilities}}; }

inline CdfSeries cdf_from_json(const json& j)
{
  return {j.at("value").get<std::vector<double>>(), j.at("probability").get<std::vector<double>>()};
}

inline Algorithm algorithm_from_json(const json& j)
{
  const auto alg = parse_algorithm(j.get<std::string>());
  if (!alg) {
    throw InputError("result document: unknown algorithm '" + j.get<std::string>() + "'");
  }
  return *alg;
}

inline json per_class_to_json(const std::map<int, std::size_t>& m)
{
  json j = json::object();
  for (const auto& [id, n] : m) {
    j[std::to_string(id)] = n;
  }
  return j;
}

inline std::map<int, std::size_t> per_class_from_json(const json& j)
{
  std::map<int, std::size_t> m;
  for (const auto& [key, value] : j.items()) {
    m[std::stoi(key)] = value.get<std::size_t>();
  }
  return m;
}

} // namespace detail

[[nodiscard]] inline json scenario_to_json(const Scenario& s)
{
  json classes = json::array();
  for (const auto& c : s.classes) {
    classes.push_back(
      {{"id", c.id}, {"gamma_th_db", c.gamma_th_db}, {"lambda_per_km2", c.lambda_per_km2}, {"l_th_db", c.l_th_db}});
  }
  json algorithms = json::array();
  for (const auto a : s.algorithms) {
    algorithms.push_back(std::string(to_string(a)));
  }
  return {
    {"area", {{"width_km", s.width_km}, {"height_km", s.height_km}}},
    {"radio", {{"fc_hz", s.radio.fc_hz}, {"pt_dbm", s.radio.pt_dbm}, {"pn_dbm", s.radio.pn_dbm}}},
    {"environment",
     {{"a", s.env.a}, {"b", s.env.b}, {"eta_los_db", s.env.eta_los}, {"eta_nlos_db", s.env.eta_nlos}}},
    {"classes", classes},
    {"sim",
     {{"trials", s.trials},
      {"master_seed", s.master_seed},
      {"grid_points", s.grid_points},
      {"rho", s.rho ? json(*s.rho) : json(nullptr)},
      {"count_mode", detail::count_mode_name(s.count_mode)},
      {"lq_mode", detail::lq_mode_name(s.lq_mode)}}},
    {"algorithms", algorithms},
  };
}

[[nodiscard]] inline Scenario scenario_from_json(const json& j)
{
  Scenario s;
  s.width_km = j.at("area").at("width_km").get<double>();
  s.height_km = j.at("area").at("height_km").get<double>();
  const auto& r = j.at("radio");
  s.radio = {r.at("fc_hz").get<double>(), r.at("pt_dbm").get<double>(), r.at("pn_dbm").get<double>()};
  const auto& e = j.at("environment");
  s.env = {e.at("a").get<double>(), e.at("b").get<double>(), e.at("eta_los_db").get<double>(),
           e.at("eta_nlos_db").get<double>()};
  s.classes.clear();
  for (const auto& c : j.at("classes")) {
    s.classes.push_back({c.at("id").get<int>(), c.at("gamma_th_db").get<double>(), c.at("lambda_per_km2").get<double>(),
                         c.at("l_th_db").get<double>()});
  }
  const auto& sim = j.at("sim");
  s.trials = sim.at("trials").get<int>();
  s.master_seed = sim.at("master_seed").get<std::uint64_t>();
  s.grid_points = sim.at("grid_points").get<int>();
  s.rho = sim.at("rho").is_null() ? std::nullopt : std::optional<double>(sim.at("rho").get<double>());
  s.count_mode = sim.at("count_mode").get<std::string>() == "fixed" ? CountMode::fixed : CountMode::poisson;
  s.lq_mode = sim.at("lq_mode").get<std::string>() == "strict" ? LqMode::strict : LqMode::fair;
  s.algorithms.clear();
  for (const auto& a : j.at("algorithms")) {
    s.algorithms.push_back(detail::algorithm_from_json(a));
  }
  return s;
}

[[nodiscard]] inline json to_json(const ResultDocument& doc)
{
  json summary = json::array();
  for (const auto& s : doc.summary) {
    summary.push_back({{"algorithm", std::string(to_string(s.algorithm))},
                       {"mean_covered", s.mean_covered},
                       {"stderr_covered", s.stderr_covered},
                       {"mean_runtime_s", s.mean_runtime_s}});
  }
  json trials = json::array();
  for (const auto& t : doc.trials) {
    trials.push_back({{"trial_id", t.trial_id},
                      {"algorithm", std::string(to_string(t.algorithm))},
                      {"total_users", t.total_users},
                      {"covered", t.covered},
                      {"per_class_covered", detail::per_class_to_json(t.per_class_covered)},
                      {"h_m", t.h},
                      {"x_d_m", t.x_d},
                      {"y_d_m", t.y_d},
                      {"runtime_s", t.runtime_s},
                      {"seed", t.seed}});
  }
  json cdf_cov = json::object();
  for (const auto& [k, v] : doc.cdf_covered) {
    cdf_cov[k] = detail::cdf_to_json(v);
  }
  json cdf_rt = json::object();
  for (const auto& [k, v] : doc.cdf_runtime) {
    cdf_rt[k] = detail::cdf_to_json(v);
  }
  json sweep = json::array();
  for (const auto& p : doc.sweep) {
    sweep.push_back({{"rho", p.rho},
                     {"algorithm", std::string(to_string(p.algorithm))},
                     {"mean_covered", p.mean_covered},
                     {"stderr", p.stderr_covered}});
  }
  return {{"schema_version", doc.schema_version},
          {"command", doc.command},
          {"scenario", scenario_to_json(doc.scenario)},
          {"summary", summary},
          {"trials", trials},
          {"cdf_covered", cdf_cov},
          {"cdf_runtime", cdf_rt},
          {"sweep", sweep}};
}

[[nodiscard]] inline ResultDocument result_from_json(const json& j)
{
  ResultDocument doc;
  doc.schema_version = j.at("schema_version").get<int>();
  if (doc.schema_version != kResultSchemaVersion) {
    throw InputError("result document: unsupported schema_version " + std::to_string(doc.schema_version));
  }
  doc.command = j.at("command").get<std::string>();
  doc.scenario = scenario_from_json(j.at("scenario"));
  for (const auto& s : j.at("summary")) {
    doc.summary.push_back({detail::algorithm_from_json(s.at("algorithm")), s.at("mean_covered").get<double>(),
                           s.at("stderr_covered").get<double>(), s.at("mean_runtime_s").get<double>()});
  }
  for (const auto& t : j.at("trials")) {
    TrialRecord r;
    r.trial_id = t.at("trial_id").get<int>();
    r.algorithm = detail::algorithm_from_json(t.at("algorithm"));
    r.total_users = t.at("total_users").get<std::size_t>();
    r.covered = t.at("covered").get<std::size_t>();
    r.per_class_covered = detail::per_class_from_json(t.at("per_class_covered"));
    r.h = t.at("h_m").get<double>();
    r.x_d = t.at("x_d_m").get<double>();
    r.y_d = t.at("y_d_m").get<double>();
    r.runtime_s = t.at("runtime_s").get<double>();
    r.seed = t.at("seed").get<std::uint64_t>();
    doc.trials.push_back(std::move(r));
  }
  for (const auto& [k, v] : j.at("cdf_covered").items()) {
    doc.cdf_covered[k] = detail::cdf_from_json(v);
  }
  for (const auto& [k, v] : j.at("cdf_runtime").items()) {
    doc.cdf_runtime[k] = detail::cdf_from_json(v);
  }
  for (const auto& p : j.at("sweep")) {
    doc.sweep.push_back({p.at("rho").get<double>(), detail::algorithm_from_json(p.at("algorithm")),
                         p.at("mean_covered").get<double>(), p.at("stderr").get<double>()});
  }
  return doc;
}

} // namespace uavbs::io
