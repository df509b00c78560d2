#pragma once

// Run configuration shared by the CLI commands. The file format is one
// `key = value` per line; `#` starts a comment. Unknown keys are errors.
// Flags given on the command line override file values, and the resolved
// configuration is written back in the same format so a run can be repeated
// with `--config <echo>`.
//
//   topology   = paper16          # shipped name or path
//   scenario   = paper-failure    # canned name or JSON path
//   duration_s = 100000
//   seed       = 1
//   stagger_refresh = false
//   monitor    = rcs1
//   origin     = abr1             # router name or dotted quad
//   ls_type    = 1,2              # empty = all
//   include_acks = false
//   bin_s      = 10
//   window     = 200
//   step       = 1
//   baseline   = 60
//   k_mad      = 6
//   measures   = all              # or e.g. rr,det,w_entr
//   tau = 1, m = 2, epsilon = 0.2, norm = euclidean, theiler = 1, l_min = 2, v_min = 2

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ospf_rqa/detector.hpp"
#include "ospf_rqa/errors.hpp"

namespace ospf_rqa {

struct RunConfig {
  std::string topology = "paper16";
  std::string scenario = "quiet";
  double duration_s = 21600.0;
  std::uint64_t seed = 1;
  bool stagger_refresh = false;

  std::string monitor;
  std::string origin;
  std::vector<int> ls_types;
  bool include_acks = false;
  int bin_s = 10;

  DetectorConfig detector{};
};

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "topology", "scenario", "duration_s", "seed",     "stagger_refresh", "monitor", "origin",
      "ls_type",  "include_acks", "bin_s",  "window",   "step",            "baseline", "k_mad",
      "measures", "tau",      "m",          "epsilon",  "norm",            "theiler", "l_min",
      "v_min"};
  return keys;
}

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) throw ValidationError("config: bad value for " + key + ": '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: bad boolean for " + key + ": '" + v + "'");
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline std::vector<int> parse_ls_types(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const int t = detail::parse_number<int>("ls_type", item);
    if (!valid_ls_type(t)) throw ValidationError("ls_type must be in 1..5, got " + item);
    out.push_back(t);
  }
  return out;
}

/// Apply one key/value pair.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_bool;
  using detail::parse_number;
  auto& d = c.detector;
  try {
    if (key == "topology") c.topology = value;
    else if (key == "scenario") c.scenario = value;
    else if (key == "duration_s") c.duration_s = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "stagger_refresh") c.stagger_refresh = parse_bool(key, value);
    else if (key == "monitor") c.monitor = value;
    else if (key == "origin") c.origin = value;
    else if (key == "ls_type") c.ls_types = parse_ls_types(value);
    else if (key == "include_acks") c.include_acks = parse_bool(key, value);
    else if (key == "bin_s") c.bin_s = parse_number<int>(key, value);
    else if (key == "window") d.window_bins = parse_number<std::size_t>(key, value);
    else if (key == "step") d.step_bins = parse_number<std::size_t>(key, value);
    else if (key == "baseline") d.baseline_bins = parse_number<std::size_t>(key, value);
    else if (key == "k_mad") d.k_mad = parse_number<double>(key, value);
    else if (key == "measures") d.measures_enabled = parse_measure_set(value);
    else if (key == "tau") d.embed.tau = parse_number<int>(key, value);
    else if (key == "m") d.embed.m = parse_number<int>(key, value);
    else if (key == "epsilon") d.embed.epsilon = parse_number<double>(key, value);
    else if (key == "norm") d.embed.norm = parse_norm(value);
    else if (key == "theiler") d.embed.theiler = parse_number<int>(key, value);
    else if (key == "l_min") d.embed.l_min = parse_number<int>(key, value);
    else if (key == "v_min") d.embed.v_min = parse_number<int>(key, value);
    else throw ValidationError("config: unknown key '" + key + "'");
  } catch (const std::invalid_argument& ex) {
    throw ValidationError("config: " + key + ": " + ex.what());
  }
}

inline void read_config(std::istream& in, RunConfig& c) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline void read_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  read_config(in, c);
}

inline std::map<std::string, std::string> config_values(const RunConfig& c) {
  using detail::format_double;
  const auto& d = c.detector;
  std::string types;
  for (int t : c.ls_types) types += (types.empty() ? "" : ",") + std::to_string(t);
  return {
      {"topology", c.topology},
      {"scenario", c.scenario},
      {"duration_s", format_double(c.duration_s)},
      {"seed", std::to_string(c.seed)},
      {"stagger_refresh", c.stagger_refresh ? "true" : "false"},
      {"monitor", c.monitor},
      {"origin", c.origin},
      {"ls_type", types},
      {"include_acks", c.include_acks ? "true" : "false"},
      {"bin_s", std::to_string(c.bin_s)},
      {"window", std::to_string(d.window_bins)},
      {"step", std::to_string(d.step_bins)},
      {"baseline", std::to_string(d.baseline_bins)},
      {"k_mad", format_double(d.k_mad)},
      {"measures", format_measure_set(d.measures_enabled)},
      {"tau", std::to_string(d.embed.tau)},
      {"m", std::to_string(d.embed.m)},
      {"epsilon", format_double(d.embed.epsilon)},
      {"norm", std::string(to_string(d.embed.norm))},
      {"theiler", std::to_string(d.embed.theiler)},
      {"l_min", std::to_string(d.embed.l_min)},
      {"v_min", std::to_string(d.embed.v_min)},
  };
}

/// Every key in a fixed order, so equal configs echo to equal bytes.
inline void write_config(std::ostream& out, const RunConfig& c) {
  const auto values = config_values(c);
  for (const auto& key : config_keys()) out << key << " = " << values.at(key) << '\n';
}

}  // namespace ospf_rqa
