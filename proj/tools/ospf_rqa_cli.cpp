// ospf-rqa: simulate LSA traffic, bin it, estimate embedding parameters and
// run the sliding-window RQA detector.
//
// Exit codes: 0 ok, 1 alerts raised under --fail-on-alert, 2 usage or data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ospf_rqa/ospf_rqa.hpp"

namespace fs = std::filesystem;
using namespace ospf_rqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAlerts = 1;
constexpr int kExitError = 2;
constexpr const char* kOutDirEnv = "OSPF_RQA_OUT";

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

// Flags that mirror config keys. Only flags actually given override the file.
struct Overrides {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    options[key] = app->add_option(flag, values[key], help);
  }

  void apply(RunConfig& c) const {
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) apply_setting(c, key, values.at(key));
  }
};

void add_detector_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--window", "window", "window length in bins (default 200)");
  o.add(app, "--step", "step", "window step in bins (default 1)");
  o.add(app, "--baseline", "baseline", "prior windows in the rolling baseline (default 60)");
  o.add(app, "--k-mad", "k_mad", "alert threshold in MADs (default 6)");
  o.add(app, "--measures", "measures", "comma-separated measures to watch, or 'all'");
  o.add(app, "--tau", "tau", "embedding delay (default 1)");
  o.add(app, "-m,--dimension", "m", "embedding dimension (default 2)");
  o.add(app, "--epsilon", "epsilon", "recurrence threshold in z-normalized units (default 0.2)");
  o.add(app, "--norm", "norm", "euclidean or max");
  o.add(app, "--theiler", "theiler", "Theiler window (default 1)");
  o.add(app, "--l-min", "l_min", "minimum diagonal line length (default 2)");
  o.add(app, "--v-min", "v_min", "minimum vertical line length (default 2)");
}

RunConfig resolve_config(const std::string& config_path, const Overrides& o) {
  RunConfig c;
  if (!config_path.empty()) read_config_file(config_path, c);
  o.apply(c);
  return c;
}

void echo_config(const fs::path& dir, const RunConfig& c) {
  std::ofstream out(dir / "run.conf", std::ios::binary);
  write_config(out, c);
}

std::vector<ScenarioEvent> resolve_scenario(const std::string& name_or_path) {
  if (auto canned = canned_scenario(name_or_path)) return *canned;
  if (!fs::exists(name_or_path))
    throw ValidationError("scenario '" + name_or_path +
                          "' is neither a canned scenario (quiet, paper-failure, paper-attacks) nor a file");
  return load_scenario_file(name_or_path);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& c, const std::string& out_dir) {
  const Topology topo = load_topology(c.topology);
  const auto scenario = resolve_scenario(c.scenario);
  SimOptions opt;
  opt.stagger_refresh = c.stagger_refresh;
  const SimResult result = run_simulation(topo, scenario, c.duration_s, c.seed, opt);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["topology"] = topo.name;
  manifest["scenario"] = c.scenario;
  manifest["duration_s"] = c.duration_s;
  manifest["seed"] = c.seed;
  auto& monitors = manifest["monitors"] = nlohmann::ordered_json::object();
  const auto totals = total_event_counts(result.logs);
  for (const auto& [name, events] : result.logs) {
    const std::string file = name + ".jsonl";
    write_lsa_log((dir / file).string(), events);
    monitors[name] = {{"log", file}, {"lsa_events", totals.at(name)}, {"records", events.size()}};
  }
  manifest["warnings"] = result.warnings;
  manifest["stats"] = {{"originations", result.stats.originations},
                       {"fight_backs", result.stats.fight_backs},
                       {"deliveries", result.stats.deliveries},
                       {"dropped_on_down_link", result.stats.dropped_on_down_link},
                       {"sync_updates", result.stats.sync_updates},
                       {"injected", result.stats.injected}};
  manifest["config"] = config_values(c);
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
  echo_config(dir, c);

  std::cout << "wrote " << result.logs.size() << " monitor logs to " << dir.string() << '\n';
  for (const auto& [name, n] : totals) std::cout << "  " << name << ": " << n << " LSA events\n";
  return kExitOk;
}

bool is_pcap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint8_t b[4] = {};
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) return false;
  const std::uint32_t magic = b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return magic == kPcapMagic || magic == kPcapMagicSwapped;
}

std::optional<double> manifest_duration(const fs::path& log) {
  const auto path = log.parent_path() / "manifest.json";
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("duration_s") || !j["duration_s"].is_number()) return std::nullopt;
  return j["duration_s"].get<double>();
}

struct ExtractArgs {
  std::string input;
  std::string out;
  std::optional<double> start_s;
  std::optional<double> duration_s;
};

int cmd_extract(const RunConfig& c, const ExtractArgs& a) {
  std::vector<LsaEvent> events;
  const bool pcap = is_pcap(a.input);
  if (pcap) {
    const std::string monitor = c.monitor.empty() ? fs::path(a.input).stem().string() : c.monitor;
    events = read_pcap_events(a.input, monitor);
  } else {
    events = read_lsa_log(a.input);
  }

  EventFilter f;
  if (!c.monitor.empty()) f.monitor = c.monitor;
  if (!c.origin.empty()) {
    auto id = Ipv4::parse(c.origin);
    if (!id) id = load_topology(c.topology).resolve_router_id(c.origin);
    if (!id) throw ValidationError("unknown origin '" + c.origin + "' in topology " + c.topology);
    f.origin = *id;
  }
  f.ls_types.insert(c.ls_types.begin(), c.ls_types.end());
  f.include_acks = c.include_acks;

  const std::int64_t bin_us = static_cast<std::int64_t>(c.bin_s) * 1'000'000;
  std::int64_t t0 = 0;
  if (a.start_s) {
    t0 = std::llround(*a.start_s * 1e6);
  } else if (pcap && !events.empty()) {
    const auto first = std::min_element(events.begin(), events.end(),
                                        [](const auto& x, const auto& y) { return x.ts_us < y.ts_us; });
    t0 = first->ts_us / bin_us * bin_us;
  }
  std::optional<double> duration = a.duration_s;
  if (!duration && !pcap) duration = manifest_duration(a.input);
  std::int64_t t1 = 0;
  if (duration) {
    t1 = t0 + std::llround(*duration * 1e6);
  } else if (!events.empty()) {
    std::int64_t last = t0;
    for (const auto& e : events) last = std::max(last, e.ts_us);
    t1 = t0 + ((last - t0) / bin_us + 1) * bin_us;
  } else {
    throw ValidationError("cannot infer the time range of an empty input; pass --duration");
  }

  const auto binned = bin_series(events, f, c.bin_s, t0, t1);
  if (a.out.empty() || a.out == "-") {
    write_count_csv(std::cout, binned.series);
  } else {
    if (auto parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
    write_count_csv(a.out, binned.series);
  }
  std::uint64_t matched = 0;
  for (auto n : binned.series.counts) matched += n;
  std::cerr << "filter " << f.describe() << ": " << matched << " events in " << binned.series.size()
            << " bins of " << c.bin_s << " s; dropped " << binned.dropped << " outside the range\n";
  return kExitOk;
}

int cmd_params(const std::string& csv, int tau_max, int m_max, const EmbedParams& p, bool json) {
  const CountSeries cs = read_count_csv(csv);
  if (cs.counts.empty()) throw SizingError("series is empty", 1);
  const Series series(cs.as_doubles());
  const auto normalized = znormalize(series);

  nlohmann::ordered_json out;
  out["bins"] = series.size();
  out["degenerate"] = normalized.degenerate;
  if (normalized.degenerate) {
    std::cerr << "warning: series is constant; RQA measures degenerate to rr=1, det=1\n";
    out["mi"] = nlohmann::json::array();
    out["tau"] = 1;
    out["tau_fallback"] = true;
    out["fnn"] = nlohmann::json::array();
    out["m"] = 1;
    out["m_saturated"] = true;
    out["diameter"] = 0.0;
  } else {
    const int tmax = std::min<int>(tau_max, static_cast<int>(series.size()) - 2);
    if (tmax < 2)
      throw SizingError("series of " + std::to_string(series.size()) + " bins is too short to estimate a delay", 4);
    const auto mi = mutual_information(series, tmax);
    const auto tau = estimate_delay(mi.values);
    const auto fnn = false_nearest_neighbors(series, tau.tau, m_max);
    const auto dim = estimate_dimension(fnn);
    const auto traj = ospf_rqa::embed(normalized.series, tau.tau, dim.m);
    out["mi"] = mi.values;
    out["tau"] = tau.tau;
    out["tau_fallback"] = tau.fallback;
    out["fnn"] = fnn;
    out["m"] = dim.m;
    out["m_saturated"] = dim.saturated;
    out["diameter"] = phase_space_diameter(traj, p.norm);
  }
  const double diameter = out["diameter"].get<double>();
  out["epsilon"] = p.epsilon;
  out["epsilon_within_10pct"] = threshold_within_guideline(p.epsilon, diameter);

  if (json) {
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "bins: " << series.size() << '\n';
  if (!normalized.degenerate) {
    std::cout << "mutual information (tau: nats):\n";
    const auto& mi = out["mi"];
    for (std::size_t k = 0; k < mi.size(); ++k)
      std::cout << "  " << k + 1 << ": " << mi[k].get<double>() << '\n';
  }
  std::cout << "tau = " << out["tau"].get<int>()
            << (out["tau_fallback"].get<bool>() ? " (no local minimum; fallback)" : "") << '\n';
  if (!normalized.degenerate) {
    std::cout << "false nearest neighbours (m: fraction):\n";
    const auto& fnn = out["fnn"];
    for (std::size_t k = 0; k < fnn.size(); ++k)
      std::cout << "  " << k + 1 << ": " << fnn[k].get<double>() << '\n';
  }
  std::cout << "m = " << out["m"].get<int>() << (out["m_saturated"].get<bool>() ? " (saturated)" : "") << '\n';
  std::cout << "phase-space diameter: " << diameter << '\n';
  std::cout << "epsilon " << p.epsilon
            << (out["epsilon_within_10pct"].get<bool>() ? " is within" : " exceeds")
            << " 10% of the diameter\n";
  return kExitOk;
}

int cmd_detect(const std::string& csv, const RunConfig& c, const std::string& out_dir, bool fail_on_alert) {
  const CountSeries cs = read_count_csv(csv);
  const MeasureSeries ms = sliding_rqa(cs, c.detector);
  const auto alerts = detect(ms, c.detector);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "measures.csv", std::ios::binary);
    write_measure_csv(out, ms);
  }
  {
    std::ofstream out(dir / "alerts.jsonl", std::ios::binary);
    write_alerts_jsonl(out, alerts);
  }
  echo_config(dir, c);

  std::cout << ms.size() << " windows, " << alerts.size() << " alerts\n";
  for (const auto& a : alerts) {
    std::cout << "  bin " << a.bin_index << " (t=" << format_seconds(a.time_s) << " s):";
    for (const auto& t : a.triggered) std::cout << ' ' << t.name;
    std::cout << '\n';
  }
  return fail_on_alert && !alerts.empty() ? kExitAlerts : kExitOk;
}

int cmd_rqa(const std::string& csv, const EmbedParams& p) {
  const CountSeries cs = read_count_csv(csv);
  const auto m = analyze_series(Series(cs.as_doubles()), p);
  nlohmann::ordered_json out;
  const auto values = as_array(m);
  for (std::size_t k = 0; k < kMeasureCount; ++k) out[std::string(kMeasureNames[k])] = values[k];
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_topology(const std::string& name) {
  const Topology t = load_topology(name);
  std::cout << "topology " << t.name << ": " << t.routers.size() << " routers, " << t.links.size()
            << " links, " << t.hosts.size() << " hosts\n";
  for (const auto& r : t.routers)
    std::cout << "  router " << r.name << " id=" << r.id.str() << (r.border ? " border" : "") << '\n';
  for (const auto& l : t.links) std::cout << "  link " << l.describe(t.routers) << '\n';
  for (const auto& h : t.hosts) std::cout << "  host " << h.name << " attach=" << t.routers[h.router].name << '\n';
  for (const auto& m : t.monitors)
    std::cout << "  monitor " << m.name << " attach=" << t.routers[m.router].name
              << (m.stub ? " stub" : " transit") << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RQA-based anomaly detection for OSPF LSA traffic"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_dir();

  auto* sim = app.add_subcommand("simulate", "run the LSA flooding simulator");
  Overrides sim_o;
  sim->add_option("--config", config_path, "key/value config file");
  sim_o.add(sim, "--topology", "topology", "topology file or shipped name (paper16, topo20, topo35)");
  sim_o.add(sim, "--scenario", "scenario", "scenario JSON file or canned name");
  sim_o.add(sim, "--duration", "duration_s", "simulated seconds");
  sim_o.add(sim, "--seed", "seed", "random seed");
  sim_o.add(sim, "--stagger-refresh", "stagger_refresh", "true: routers boot at unrelated times");
  sim->add_option("-o,--out", out_dir, std::string("output directory (default $") + kOutDirEnv + " or .)");

  auto* ext = app.add_subcommand("extract", "bin LSA events from a pcap or event log into a count series");
  Overrides ext_o;
  ExtractArgs ext_args;
  ext->add_option("input", ext_args.input, "pcap file or JSON-lines event log")->required();
  ext->add_option("--config", config_path, "key/value config file");
  ext_o.add(ext, "--monitor", "monitor", "keep events seen by this monitor (names pcap events)");
  ext_o.add(ext, "--origin", "origin", "advertising router: name (with --topology) or dotted quad");
  ext_o.add(ext, "--topology", "topology", "topology used to resolve router names");
  ext_o.add(ext, "--ls-type", "ls_type", "comma-separated LSA types to keep");
  ext_o.add(ext, "--include-acks", "include_acks", "true to count acknowledgements too");
  ext_o.add(ext, "--bin", "bin_s", "bin size in seconds (default 10)");
  ext->add_option("--start", ext_args.start_s, "range start in seconds");
  ext->add_option("--duration", ext_args.duration_s, "range length in seconds");
  ext->add_option("-o,--out", ext_args.out, "CSV output path (default stdout)");

  auto* par = app.add_subcommand("params", "estimate embedding delay and dimension");
  std::string par_csv;
  int tau_max = 20;
  int m_max = 10;
  bool par_json = false;
  Overrides par_o;
  par->add_option("series", par_csv, "count series CSV")->required();
  par->add_option("--tau-max", tau_max, "largest delay on the MI curve")->check(CLI::PositiveNumber);
  par->add_option("--m-max", m_max, "largest dimension for false nearest neighbours")->check(CLI::PositiveNumber);
  par->add_flag("--json", par_json, "machine-readable output");
  par_o.add(par, "--epsilon", "epsilon", "threshold checked against the 10% rule");
  par_o.add(par, "--norm", "norm", "euclidean or max");

  auto* det = app.add_subcommand("detect", "sliding-window RQA and change detection");
  std::string det_csv;
  bool fail_on_alert = false;
  Overrides det_o;
  det->add_option("series", det_csv, "count series CSV")->required();
  det->add_option("--config", config_path, "key/value config file");
  add_detector_flags(det, det_o);
  det->add_flag("--fail-on-alert", fail_on_alert, "exit 1 when any alert is raised");
  det->add_option("-o,--out", out_dir, std::string("output directory (default $") + kOutDirEnv + " or .)");

  auto* rqa = app.add_subcommand("rqa", "RQA measures of a whole series");
  std::string rqa_csv;
  Overrides rqa_o;
  rqa->add_option("series", rqa_csv, "count series CSV")->required();
  add_detector_flags(rqa, rqa_o);

  auto* topo = app.add_subcommand("topology", "print a topology");
  std::string topo_name = "paper16";
  topo->add_option("name", topo_name, "file or shipped name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(resolve_config(config_path, sim_o), out_dir);
    if (ext->parsed()) return cmd_extract(resolve_config(config_path, ext_o), ext_args);
    if (par->parsed()) {
      const RunConfig c = resolve_config({}, par_o);
      return cmd_params(par_csv, tau_max, m_max, c.detector.embed, par_json);
    }
    if (det->parsed()) return cmd_detect(det_csv, resolve_config(config_path, det_o), out_dir, fail_on_alert);
    if (rqa->parsed()) return cmd_rqa(rqa_csv, resolve_config({}, rqa_o).detector.embed);
    if (topo->parsed()) return cmd_topology(topo_name);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
