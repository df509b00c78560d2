#pragma once

// Topology description: routers, point-to-point links, hosts and monitors.
//
// Text format, one declaration per line, '#' starts a comment:
//
//   name <topology-name>
//   area <id>                           (informational; single area)
//   router <name> [id=<dotted quad>]    (id defaults to 10.255.x.y by order)
//   border <router>                     (marks an area border router)
//   host <name> attach=<router>
//   link <router>.<iface> <router>.<iface> [delay=<lo>-<hi>]   (ms, default 2-20)
//   monitor <name> attach=<router> [stub|transit]               (default stub)
//
// A stub monitor sits on a passive segment of its router and sees every new
// LSA instance the router installs or originates, once. A transit monitor
// sees every LS Update arriving at the router over its router links,
// duplicates included.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <string_view>
#include <vector>

#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/lsa.hpp"
#include "ospf_rqa/shipped_topologies.hpp"

namespace ospf_rqa {

struct Router {
  std::string name;
  Ipv4 id;
  std::vector<std::string> interfaces;
  bool border = false;
};

struct Link {
  std::size_t a = 0;
  std::string iface_a;
  std::size_t b = 0;
  std::string iface_b;
  int delay_lo_ms = 2;
  int delay_hi_ms = 20;

  std::string describe(const std::vector<Router>& routers) const {
    return routers[a].name + "." + iface_a + " <-> " + routers[b].name + "." + iface_b;
  }
};

struct Host {
  std::string name;
  std::size_t router = 0;
};

struct Monitor {
  std::string name;
  std::size_t router = 0;
  bool stub = true;
};

struct Topology {
  std::string name;
  std::vector<Router> routers;
  std::vector<Link> links;
  std::vector<Host> hosts;
  std::vector<Monitor> monitors;
  std::set<int> areas;

  std::size_t node_count() const noexcept { return routers.size() + hosts.size(); }

  std::optional<std::size_t> router_index(std::string_view name) const {
    for (std::size_t i = 0; i < routers.size(); ++i)
      if (routers[i].name == name) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> host_index(std::string_view name) const {
    for (std::size_t i = 0; i < hosts.size(); ++i)
      if (hosts[i].name == name) return i;
    return std::nullopt;
  }

  /// Link attached to `router.iface`, if any.
  std::optional<std::size_t> link_at(std::size_t router, std::string_view iface) const {
    for (std::size_t i = 0; i < links.size(); ++i) {
      const auto& l = links[i];
      if ((l.a == router && l.iface_a == iface) || (l.b == router && l.iface_b == iface)) return i;
    }
    return std::nullopt;
  }

  /// Accepts a router name or a dotted-quad router ID.
  std::optional<Ipv4> resolve_router_id(std::string_view name_or_id) const {
    if (auto ip = Ipv4::parse(name_or_id)) return ip;
    if (auto idx = router_index(name_or_id)) return routers[*idx].id;
    return std::nullopt;
  }

  std::optional<std::string> router_name(Ipv4 id) const {
    for (const auto& r : routers)
      if (r.id == id) return r.name;
    return std::nullopt;
  }

  std::vector<std::string> monitor_names() const {
    std::vector<std::string> out;
    for (const auto& m : monitors) out.push_back(m.name);
    return out;
  }
};

namespace detail {

struct RawLink {
  std::string end_a, end_b;
  int lo = 2, hi = 20;
  std::size_t line = 0;
};

inline std::map<std::string, std::string> parse_options(const std::vector<std::string>& tok,
                                                        std::size_t from,
                                                        std::set<std::string>* flags) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = from; i < tok.size(); ++i) {
    auto eq = tok[i].find('=');
    if (eq == std::string::npos) {
      if (flags) flags->insert(tok[i]);
    } else {
      kv[tok[i].substr(0, eq)] = tok[i].substr(eq + 1);
    }
  }
  return kv;
}

}  // namespace detail

/// Parse and validate. Every problem found is listed in one ValidationError.
inline Topology parse_topology(std::istream& in) {
  Topology topo;
  std::vector<std::string> problems;
  std::vector<detail::RawLink> raw_links;
  std::vector<std::pair<std::string, std::size_t>> raw_borders;
  std::vector<std::tuple<std::string, std::string, std::size_t>> raw_hosts;
  std::vector<std::tuple<std::string, std::string, bool, std::size_t>> raw_monitors;
  std::vector<std::pair<std::optional<Ipv4>, std::size_t>> router_ids;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ls(text);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(line) + ": ";
    const std::string& kw = tok[0];
    if (kw == "name" && tok.size() == 2) {
      topo.name = tok[1];
    } else if (kw == "area" && tok.size() == 2) {
      try {
        topo.areas.insert(std::stoi(tok[1]));
      } catch (const std::logic_error&) {
        problems.push_back(where + "bad area id '" + tok[1] + "'");
      }
    } else if (kw == "router" && tok.size() >= 2) {
      auto kv = detail::parse_options(tok, 2, nullptr);
      std::optional<Ipv4> id;
      if (auto it = kv.find("id"); it != kv.end()) {
        id = Ipv4::parse(it->second);
        if (!id) problems.push_back(where + "router " + tok[1] + " has invalid id '" + it->second + "'");
      }
      topo.routers.push_back(Router{tok[1], {}, {}, false});
      router_ids.emplace_back(id, line);
    } else if (kw == "border" && tok.size() == 2) {
      raw_borders.emplace_back(tok[1], line);
    } else if (kw == "host" && tok.size() >= 2) {
      auto kv = detail::parse_options(tok, 2, nullptr);
      raw_hosts.emplace_back(tok[1], kv.count("attach") ? kv["attach"] : "", line);
    } else if (kw == "link" && tok.size() >= 3) {
      detail::RawLink rl{tok[1], tok[2], 2, 20, line};
      auto kv = detail::parse_options(tok, 3, nullptr);
      if (auto it = kv.find("delay"); it != kv.end()) {
        const auto dash = it->second.find('-');
        try {
          rl.lo = std::stoi(it->second.substr(0, dash));
          rl.hi = dash == std::string::npos ? rl.lo : std::stoi(it->second.substr(dash + 1));
        } catch (const std::logic_error&) {
          problems.push_back(where + "bad delay range '" + it->second + "'");
        }
        if (rl.lo < 0 || rl.hi < rl.lo) problems.push_back(where + "delay range must satisfy 0 <= lo <= hi");
      }
      raw_links.push_back(rl);
    } else if (kw == "monitor" && tok.size() >= 2) {
      std::set<std::string> flags;
      auto kv = detail::parse_options(tok, 2, &flags);
      const bool transit = flags.contains("transit");
      raw_monitors.emplace_back(tok[1], kv.count("attach") ? kv["attach"] : "", !transit, line);
    } else {
      problems.push_back(where + "unrecognised declaration '" + text + "'");
    }
  }

  // Identifiers: node names are shared by routers and hosts.
  std::map<std::string, int> node_names;
  for (const auto& r : topo.routers) ++node_names[r.name];
  for (const auto& [name, attach, l] : raw_hosts) ++node_names[name];
  for (const auto& [name, count] : node_names)
    if (count > 1) problems.push_back("duplicate node id '" + name + "'");

  std::set<std::uint32_t> used_ids;
  for (const auto& [id, l] : router_ids)
    if (id) used_ids.insert(id->value);
  std::uint32_t next_auto = (10u << 24) | (255u << 16) | 1u;
  std::map<std::uint32_t, int> id_count;
  for (std::size_t i = 0; i < topo.routers.size(); ++i) {
    if (router_ids[i].first) {
      topo.routers[i].id = *router_ids[i].first;
    } else {
      while (used_ids.contains(next_auto)) ++next_auto;
      topo.routers[i].id = Ipv4{next_auto};
      used_ids.insert(next_auto++);
    }
    ++id_count[topo.routers[i].id.value];
  }
  for (const auto& [id, count] : id_count)
    if (count > 1) problems.push_back("duplicate router id " + Ipv4{id}.str());

  for (const auto& [name, l] : raw_borders) {
    if (auto idx = topo.router_index(name)) {
      topo.routers[*idx].border = true;
    } else {
      problems.push_back("line " + std::to_string(l) + ": border marker names unknown router '" + name + "'");
    }
  }

  for (const auto& [name, attach, l] : raw_hosts) {
    if (auto idx = topo.router_index(attach)) {
      topo.hosts.push_back(Host{name, *idx});
    } else {
      problems.push_back("host '" + name + "' attaches to unknown router '" + attach + "'");
    }
  }

  std::set<std::pair<std::size_t, std::string>> used_ifaces;
  for (const auto& rl : raw_links) {
    const std::string label = "link " + rl.end_a + " " + rl.end_b + " (line " + std::to_string(rl.line) + ")";
    auto split = [&](const std::string& end) -> std::optional<std::pair<std::size_t, std::string>> {
      const auto dot = end.find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == end.size()) {
        problems.push_back(label + ": endpoint '" + end + "' must be <router>.<iface>");
        return std::nullopt;
      }
      const auto router = topo.router_index(end.substr(0, dot));
      if (!router) {
        problems.push_back(label + ": endpoint references nonexistent router '" + end.substr(0, dot) + "'");
        return std::nullopt;
      }
      return std::make_pair(*router, end.substr(dot + 1));
    };
    auto a = split(rl.end_a);
    auto b = split(rl.end_b);
    if (!a || !b) continue;
    if (a->first == b->first) {
      problems.push_back(label + ": a link cannot connect a router to itself");
      continue;
    }
    bool clash = false;
    for (const auto& end : {*a, *b}) {
      if (!used_ifaces.insert(end).second) {
        problems.push_back(label + ": interface " + topo.routers[end.first].name + "." + end.second +
                           " is already used by another link");
        clash = true;
      }
    }
    if (clash) continue;
    topo.routers[a->first].interfaces.push_back(a->second);
    topo.routers[b->first].interfaces.push_back(b->second);
    topo.links.push_back(Link{a->first, a->second, b->first, b->second, rl.lo, rl.hi});
  }

  std::map<std::string, int> monitor_names;
  for (const auto& [name, attach, stub, l] : raw_monitors) {
    ++monitor_names[name];
    if (auto idx = topo.router_index(attach)) {
      topo.monitors.push_back(Monitor{name, *idx, stub});
    } else if (topo.host_index(attach)) {
      problems.push_back("monitor '" + name + "' attaches to host '" + attach +
                         "'; monitors must attach to a router that receives floods");
    } else {
      problems.push_back("monitor '" + name + "' attaches to unknown node '" + attach + "'");
    }
  }
  for (const auto& [name, count] : monitor_names)
    if (count > 1) problems.push_back("duplicate monitor id '" + name + "'");

  if (topo.routers.empty()) problems.push_back("topology declares no routers");

  if (!problems.empty()) {
    std::string msg = "invalid topology";
    if (!topo.name.empty()) msg += " '" + topo.name + "'";
    msg += ":";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
  if (topo.areas.empty()) topo.areas.insert(0);
  return topo;
}

inline Topology parse_topology(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_topology(in);
}

inline std::optional<std::string_view> shipped_topology_text(std::string_view name) {
  for (const auto& t : shipped::kTopologies)
    if (t.name == name) return t.text;
  return std::nullopt;
}

/// Loads a topology file, or one of the shipped topologies by name
/// (paper16, topo20, topo35) when no such file exists.
inline Topology load_topology(const std::string& path_or_name) {
  if (std::filesystem::exists(path_or_name)) {
    std::ifstream in(path_or_name);
    if (!in) throw std::runtime_error("cannot open topology file: " + path_or_name);
    return parse_topology(in);
  }
  if (auto text = shipped_topology_text(path_or_name)) return parse_topology(*text);
  throw std::runtime_error("topology not found: " + path_or_name);
}

}  // namespace ospf_rqa
