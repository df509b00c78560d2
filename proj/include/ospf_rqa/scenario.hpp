#pragma once

// Scripted scenario events: interface failures/restores and LSA falsification
// attacks. Scenario files are a JSON list of
//   {"time_s": <number>, "kind": <kind>, "subject": <subject>, "params": {...}}
// where subject is "router.iface", a list of those (simultaneous events), or
// {"attacker": <node>, "victim": <router>} for attacks.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/topology.hpp"

namespace ospf_rqa {

enum class ScenarioKind {
  iface_down,
  iface_up,
  attack_disguised,
  attack_adjacency_spoof,
  attack_partition,
};

inline std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::iface_down: return "iface_down";
    case ScenarioKind::iface_up: return "iface_up";
    case ScenarioKind::attack_disguised: return "attack_disguised";
    case ScenarioKind::attack_adjacency_spoof: return "attack_adjacency_spoof";
    case ScenarioKind::attack_partition: return "attack_partition";
  }
  return "unknown";
}

inline std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) {
  for (auto k : {ScenarioKind::iface_down, ScenarioKind::iface_up, ScenarioKind::attack_disguised,
                 ScenarioKind::attack_adjacency_spoof, ScenarioKind::attack_partition})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline bool is_attack(ScenarioKind k) {
  return k == ScenarioKind::attack_disguised || k == ScenarioKind::attack_adjacency_spoof ||
         k == ScenarioKind::attack_partition;
}

struct ScenarioEvent {
  double time_s = 0.0;
  ScenarioKind kind = ScenarioKind::iface_down;
  std::vector<std::string> interfaces;  // "router.iface", interface events only
  std::string attacker;                 // attacks only
  std::string victim;                   // attacks only; may be empty
  nlohmann::json params = nlohmann::json::object();

  double param(const char* key, double fallback) const {
    auto it = params.find(key);
    return it != params.end() && it->is_number() ? it->get<double>() : fallback;
  }

  std::string param_str(const char* key, const std::string& fallback) const {
    auto it = params.find(key);
    return it != params.end() && it->is_string() ? it->get<std::string>() : fallback;
  }

  /// Seconds during which an attack keeps injecting; 0 for interface events.
  double active_duration_s() const {
    return is_attack(kind) ? param("duration_s", 900.0) : 0.0;
  }
};

inline nlohmann::json to_json(const ScenarioEvent& e) {
  nlohmann::json j;
  j["time_s"] = e.time_s;
  j["kind"] = std::string(to_string(e.kind));
  if (is_attack(e.kind)) {
    nlohmann::json subject{{"attacker", e.attacker}};
    if (!e.victim.empty()) subject["victim"] = e.victim;
    j["subject"] = subject;
  } else if (e.interfaces.size() == 1) {
    j["subject"] = e.interfaces.front();
  } else {
    j["subject"] = e.interfaces;
  }
  j["params"] = e.params;
  return j;
}

inline std::vector<ScenarioEvent> parse_scenario(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ValidationError("scenario must be a JSON list of events");
  std::vector<ScenarioEvent> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    const std::string where = "scenario event " + std::to_string(i) + ": ";
    if (!j.is_object()) throw ValidationError(where + "must be an object");
    ScenarioEvent e;
    if (!j.contains("time_s") || !j["time_s"].is_number())
      throw ValidationError(where + "missing numeric 'time_s'");
    e.time_s = j["time_s"].get<double>();
    if (!j.contains("kind") || !j["kind"].is_string())
      throw ValidationError(where + "missing 'kind'");
    auto kind = parse_scenario_kind(j["kind"].get<std::string>());
    if (!kind) throw ValidationError(where + "unknown kind '" + j["kind"].get<std::string>() + "'");
    e.kind = *kind;
    if (!j.contains("subject")) throw ValidationError(where + "missing 'subject'");
    const auto& subj = j["subject"];
    if (is_attack(e.kind)) {
      if (!subj.is_object() || !subj.contains("attacker") || !subj["attacker"].is_string())
        throw ValidationError(where + "attack subject must be {\"attacker\": ..., \"victim\": ...}");
      e.attacker = subj["attacker"].get<std::string>();
      if (subj.contains("victim") && subj["victim"].is_string()) e.victim = subj["victim"].get<std::string>();
    } else if (subj.is_string()) {
      e.interfaces.push_back(subj.get<std::string>());
    } else if (subj.is_array() && !subj.empty()) {
      for (const auto& s : subj) {
        if (!s.is_string()) throw ValidationError(where + "interface subjects must be strings");
        e.interfaces.push_back(s.get<std::string>());
      }
    } else {
      throw ValidationError(where + "interface subject must be \"router.iface\" or a list of them");
    }
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ValidationError(where + "'params' must be an object");
      e.params = j["params"];
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<ScenarioEvent> load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ValidationError("scenario file " + path + " is not valid JSON: " + ex.what());
  }
  return parse_scenario(doc);
}

inline std::string dump_scenario(const std::vector<ScenarioEvent>& events) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& e : events) doc.push_back(to_json(e));
  return doc.dump(2);
}

/// Checks ordering, time range and that every subject exists.
inline void validate_scenario(const std::vector<ScenarioEvent>& events, const Topology& topo,
                              double duration_s) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const std::string where = "event " + std::to_string(i) + " (" + std::string(to_string(e.kind)) + "): ";
    if (i > 0 && e.time_s < events[i - 1].time_s) problems.push_back(where + "events are not sorted by time");
    if (e.time_s < 0.0 || e.time_s > duration_s)
      problems.push_back(where + "time " + std::to_string(e.time_s) + " outside [0, duration]");
    if (is_attack(e.kind)) {
      const bool attacker_ok = topo.router_index(e.attacker) || topo.host_index(e.attacker);
      if (!attacker_ok) problems.push_back(where + "unknown attacker '" + e.attacker + "'");
      if (e.kind == ScenarioKind::attack_adjacency_spoof && !topo.host_index(e.attacker) &&
          !topo.router_index(e.attacker))
        problems.push_back(where + "adjacency spoofing needs a host or router attacker");
      if (e.kind == ScenarioKind::attack_partition && !topo.router_index(e.attacker))
        problems.push_back(where + "partition attacker must be a router");
      if (e.kind == ScenarioKind::attack_disguised) {
        if (!topo.router_index(e.attacker)) problems.push_back(where + "disguised attacker must be a router");
        if (!topo.router_index(e.victim)) problems.push_back(where + "unknown victim '" + e.victim + "'");
        else if (e.victim == e.attacker) problems.push_back(where + "victim and attacker must differ");
      }
    } else {
      for (const auto& iface : e.interfaces) {
        const auto dot = iface.find('.');
        const auto router = dot == std::string::npos ? std::nullopt : topo.router_index(iface.substr(0, dot));
        if (!router || !topo.link_at(*router, iface.substr(dot + 1)))
          problems.push_back(where + "unknown interface '" + iface + "'");
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
}

inline constexpr double kFailureSpacingS = 14400.0;

/// Interface failure timeline on abr1.eth0 and r6.eth1, one action every
/// four hours starting at 14400 s:
///   14400 abr1.eth0 down   28800 abr1.eth0 up
///   43200 r6.eth1 down     57600 r6.eth1 up
///   72000 abr1.eth0 + r6.eth1 down (isolates r14)
///   86400 abr1.eth0 + r6.eth1 up
inline std::vector<ScenarioEvent> scenario_paper_failure() {
  const double t0 = kFailureSpacingS;
  auto ev = [&](int k, ScenarioKind kind, std::vector<std::string> ifaces) {
    ScenarioEvent e;
    e.time_s = t0 + k * kFailureSpacingS;
    e.kind = kind;
    e.interfaces = std::move(ifaces);
    return e;
  };
  return {
      ev(0, ScenarioKind::iface_down, {"abr1.eth0"}),
      ev(1, ScenarioKind::iface_up, {"abr1.eth0"}),
      ev(2, ScenarioKind::iface_down, {"r6.eth1"}),
      ev(3, ScenarioKind::iface_up, {"r6.eth1"}),
      ev(4, ScenarioKind::iface_down, {"abr1.eth0", "r6.eth1"}),
      ev(5, ScenarioKind::iface_up, {"abr1.eth0", "r6.eth1"}),
  };
}

/// Disguised (r8 against r9), adjacency spoofing (host2) and partitioning (r8)
/// attacks at 2485, 5012 and 9532 s.
inline std::vector<ScenarioEvent> scenario_paper_attacks() {
  ScenarioEvent disguised;
  disguised.time_s = 2485.0;
  disguised.kind = ScenarioKind::attack_disguised;
  disguised.attacker = "r8";
  disguised.victim = "r9";
  disguised.params = {{"period_s", 60.0}, {"duration_s", 900.0}};

  ScenarioEvent spoof;
  spoof.time_s = 5012.0;
  spoof.kind = ScenarioKind::attack_adjacency_spoof;
  spoof.attacker = "host2";
  spoof.victim = "r10";
  spoof.params = {{"phantom", "10.0.0.250"}, {"period_s", 30.0}, {"duration_s", 900.0}};

  ScenarioEvent partition;
  partition.time_s = 9532.0;
  partition.kind = ScenarioKind::attack_partition;
  partition.attacker = "r8";
  partition.params = {{"period_s", 60.0}, {"duration_s", 900.0}};

  return {disguised, spoof, partition};
}

/// Canned scenario by name: "quiet", "paper-failure", "paper-attacks".
inline std::optional<std::vector<ScenarioEvent>> canned_scenario(std::string_view name) {
  if (name == "quiet" || name == "none") return std::vector<ScenarioEvent>{};
  if (name == "paper-failure") return scenario_paper_failure();
  if (name == "paper-attacks") return scenario_paper_attacks();
  return std::nullopt;
}

}  // namespace ospf_rqa
