#pragma once

// Random connected topologies in the text format, for property tests.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "ospf_rqa/scenario.hpp"
#include "ospf_rqa/topology.hpp"

namespace topogen {

/// Random spanning tree plus a few chords; monitors attach to distinct routers.
inline std::string random_topology_text(std::mt19937_64& rng, int min_routers = 3, int max_routers = 20) {
  const int n = min_routers + static_cast<int>(rng() % static_cast<std::uint64_t>(max_routers - min_routers + 1));
  std::set<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.insert({static_cast<int>(rng() % static_cast<std::uint64_t>(v)), v});
  const int chords = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  for (int c = 0; c < chords; ++c) {
    int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
  }
  std::string text = "name random\narea 0\n";
  for (int v = 0; v < n; ++v)
    text += "router n" + std::to_string(v) + " id=10.1." + std::to_string(v / 200) + "." +
            std::to_string(1 + v % 200) + "\n";
  std::vector<int> next_iface(static_cast<std::size_t>(n), 0);
  for (auto [a, b] : edges) {
    const int lo = static_cast<int>(rng() % 10);
    const int hi = lo + static_cast<int>(rng() % 30);
    text += "link n" + std::to_string(a) + ".eth" + std::to_string(next_iface[a]++) + " n" +
            std::to_string(b) + ".eth" + std::to_string(next_iface[b]++) + " delay=" + std::to_string(lo) +
            "-" + std::to_string(hi) + "\n";
  }
  const int monitors = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(n, 6) - 1));
  std::set<int> chosen;
  while (static_cast<int>(chosen.size()) < std::min(monitors, n))
    chosen.insert(static_cast<int>(rng() % static_cast<std::uint64_t>(n)));
  for (int v : chosen) text += "monitor m" + std::to_string(v) + " attach=n" + std::to_string(v) + " stub\n";
  return text;
}

inline ospf_rqa::Topology random_topology(std::mt19937_64& rng, int min_routers = 3, int max_routers = 20) {
  return ospf_rqa::parse_topology(std::string_view(random_topology_text(rng, min_routers, max_routers)));
}

/// Hop distances from router `src`, ignoring link `skip`.
inline std::vector<int> hops_from(const ospf_rqa::Topology& t, std::size_t src,
                                  std::size_t skip = static_cast<std::size_t>(-1)) {
  std::vector<int> dist(t.routers.size(), -1);
  std::vector<std::size_t> frontier{src};
  dist[src] = 0;
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier)
      for (std::size_t i = 0; i < t.links.size(); ++i) {
        if (i == skip) continue;
        const auto& l = t.links[i];
        const std::size_t v = l.a == u ? l.b : l.b == u ? l.a : u;
        if (v != u && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          next.push_back(v);
        }
      }
    frontier = std::move(next);
  }
  return dist;
}

/// Links whose loss leaves the graph connected.
inline std::vector<std::size_t> non_bridge_links(const ospf_rqa::Topology& t) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t.links.size(); ++i) {
    const auto d = hops_from(t, 0, i);
    if (std::find(d.begin(), d.end(), -1) == d.end()) out.push_back(i);
  }
  return out;
}

/// kind 0: quiet; 1: flap a non-bridge link; 2: partition attack; 3: spoofed
/// phantom router. Kind 1 falls back to quiet on trees.
inline std::vector<ospf_rqa::ScenarioEvent> non_isolating_scenario(std::mt19937_64& rng,
                                                                    const ospf_rqa::Topology& t, int kind) {
  using namespace ospf_rqa;
  std::vector<ScenarioEvent> out;
  const auto pick = [&] { return t.routers[rng() % t.routers.size()].name; };
  if (kind == 1) {
    const auto links = non_bridge_links(t);
    if (links.empty()) return out;
    const auto& l = t.links[links[rng() % links.size()]];
    ScenarioEvent down;
    down.time_s = 500 + static_cast<double>(rng() % 1000);
    down.interfaces = {t.routers[l.a].name + "." + l.iface_a};
    auto up = down;
    up.kind = ScenarioKind::iface_up;
    up.time_s = down.time_s + 10 + static_cast<double>(rng() % 1000);
    out = {down, up};
  } else if (kind == 2) {
    ScenarioEvent e;
    e.time_s = 700;
    e.kind = ScenarioKind::attack_partition;
    e.attacker = pick();
    e.params = {{"period_s", 60.0}, {"duration_s", 600.0}};
    out = {e};
  } else if (kind == 3) {
    ScenarioEvent e;
    e.time_s = 900;
    e.kind = ScenarioKind::attack_adjacency_spoof;
    e.attacker = pick();
    e.params = {{"phantom", "10.9.9.9"}, {"period_s", 30.0}, {"duration_s", 600.0}};
    out = {e};
  }
  return out;
}

}  // namespace topogen
