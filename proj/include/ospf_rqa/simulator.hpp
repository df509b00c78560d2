#pragma once

// Deterministic discrete-event model of OSPF LSA origination and flooding in
// a single area. Only the LSA traffic is modelled; there is no SPF run and no
// forwarding plane.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/lsa.hpp"
#include "ospf_rqa/scenario.hpp"
#include "ospf_rqa/topology.hpp"

namespace ospf_rqa {

inline constexpr std::int32_t kInitialSequence = static_cast<std::int32_t>(0x80000001u);

struct SimOptions {
  double refresh_s = 1800.0;
  double refresh_jitter_s = 30.0;  // uniform +/- per refresh interval
  double min_ls_interval_s = 5.0;  // minimum spacing of one router's originations
  double sync_delay_s = 0.05;      // link up -> database exchange
  // When set, each router's first refresh is drawn uniformly from
  // (0, refresh_s] instead of refresh_s +/- jitter, as if routers had booted
  // at unrelated times.
  bool stagger_refresh = false;
};

struct LsaKey {
  int type = 1;
  Ipv4 ls_id;
  Ipv4 adv;
  auto operator<=>(const LsaKey&) const = default;
};

struct LsaInstance {
  LsaKey key;
  std::int32_t seq = kInitialSequence;
  int age_s = 0;
  std::uint64_t digest = 0;  // fingerprint of the advertised link set
};

struct SimStats {
  std::size_t originations = 0;
  std::size_t fight_backs = 0;
  std::size_t deliveries = 0;
  std::size_t dropped_on_down_link = 0;
  std::size_t sync_updates = 0;
  std::size_t injected = 0;
};

struct SimResult {
  std::map<std::string, std::vector<LsaEvent>> logs;  // monitor -> events in time order
  std::vector<std::string> warnings;
  SimStats stats;
};

class Simulator {
 public:
  Simulator(const Topology& topo, std::vector<ScenarioEvent> scenario, SimOptions opt,
            std::uint64_t seed)
      : topo_(topo), scenario_(std::move(scenario)), opt_(opt), rng_(seed) {
    routers_.resize(topo_.routers.size());
    link_up_.assign(topo_.links.size(), true);
    for (std::size_t i = 0; i < topo_.links.size(); ++i) {
      routers_[topo_.links[i].a].links.push_back(i);
      routers_[topo_.links[i].b].links.push_back(i);
    }
    for (std::size_t m = 0; m < topo_.monitors.size(); ++m)
      routers_[topo_.monitors[m].router].monitors.push_back(m);
  }

  SimResult run(double duration_s) {
    if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
    validate_scenario(scenario_, topo_, duration_s);
    end_us_ = to_us(duration_s);
    result_ = SimResult{};
    for (const auto& m : topo_.monitors) result_.logs[m.name];

    for (std::size_t r = 0; r < routers_.size(); ++r) schedule(0, r, Originate{r, 0, false});
    for (std::size_t i = 0; i < scenario_.size(); ++i)
      schedule(to_us(scenario_[i].time_s), kNoNode, ScenarioStep{i, 0});

    while (!queue_.empty()) {
      const QueuedEvent ev = queue_.top();
      queue_.pop();
      if (ev.t_us > end_us_) break;
      now_ = ev.t_us;
      std::visit([this](const auto& p) { handle(p); }, ev.payload);
    }
    for (auto& [name, log] : result_.logs)
      std::stable_sort(log.begin(), log.end(),
                       [](const LsaEvent& a, const LsaEvent& b) { return a.ts_us < b.ts_us; });
    return std::move(result_);
  }

 private:
  static constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

  struct Originate {
    std::size_t router;
    std::uint64_t generation;  // 0 = triggered; otherwise must match the refresh timer
    bool falsified;            // partition attack: omit links from the advertisement
  };
  struct Deliver {
    std::size_t link;  // kNoNode for injection from an attached host
    std::size_t from;
    std::size_t to;
    LsaInstance lsa;
  };
  struct Sync {
    std::size_t link;
  };
  struct ScenarioStep {
    std::size_t index;
    int step;
  };
  using Payload = std::variant<Originate, Deliver, Sync, ScenarioStep>;

  struct QueuedEvent {
    std::int64_t t_us;
    std::size_t node;
    std::uint64_t order;
    Payload payload;
    // Earliest time first; ties by node id then scheduling order.
    bool operator>(const QueuedEvent& o) const {
      if (t_us != o.t_us) return t_us > o.t_us;
      if (node != o.node) return node > o.node;
      return order > o.order;
    }
  };

  struct StoredLsa {
    LsaInstance lsa;
    std::int64_t installed_us = 0;
  };

  struct RouterState {
    std::vector<std::size_t> links;
    std::vector<std::size_t> monitors;
    std::map<LsaKey, StoredLsa> lsdb;
    std::int32_t seq = kInitialSequence - 1;
    std::optional<std::int64_t> last_origination_us;
    bool origination_pending = false;
    bool pending_falsified = false;
    std::uint64_t refresh_generation = 0;
    bool first_refresh = true;
    bool falsified = false;
  };

  static std::int64_t to_us(double s) { return static_cast<std::int64_t>(std::llround(s * 1e6)); }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  void schedule(std::int64_t t_us, std::size_t node, Payload p) {
    queue_.push(QueuedEvent{t_us, node, order_++, std::move(p)});
  }

  std::size_t other_end(std::size_t link, std::size_t router) const {
    const auto& l = topo_.links[link];
    return l.a == router ? l.b : l.a;
  }

  std::int64_t sample_delay_us(std::size_t link) {
    const auto& l = topo_.links[link];
    return static_cast<std::int64_t>(std::llround(uniform(l.delay_lo_ms, l.delay_hi_ms) * 1000.0));
  }

  int current_age(const StoredLsa& s) const {
    const auto held = static_cast<int>((now_ - s.installed_us) / 1'000'000);
    return std::min(kMaxAge, s.lsa.age_s + held);
  }

  std::uint64_t link_digest(std::size_t r, bool falsified) const {
    // FNV-1a over the router's operational link set.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(topo_.routers[r].id.value);
    for (std::size_t link : routers_[r].links) {
      if (!link_up_[link]) continue;
      if (falsified && link == routers_[r].links.front()) continue;
      mix(link + 1);
    }
    if (falsified) mix(0xfa15e);
    return h;
  }

  LsaEvent make_event(const std::string& monitor, const LsaInstance& lsa, int age, bool ack,
                      std::int64_t ts) const {
    LsaEvent e;
    e.ts_us = ts;
    e.monitor = monitor;
    e.ls_type = lsa.key.type;
    e.adv_router = lsa.key.adv;
    e.ls_id = lsa.key.ls_id;
    e.ls_age = std::min(kMaxAge, age);
    e.ls_seq = lsa.seq;
    e.is_ack = ack;
    return e;
  }

  // Stub monitors see each instance their router installs, one hop further on.
  void record_install(std::size_t r, const LsaInstance& lsa, int age_now) {
    for (std::size_t m : routers_[r].monitors) {
      const auto& mon = topo_.monitors[m];
      if (!mon.stub) continue;
      auto& log = result_.logs[mon.name];
      log.push_back(make_event(mon.name, lsa, age_now + 1, false, now_));
      log.push_back(make_event(mon.name, lsa, age_now + 1, true, now_));
    }
  }

  void record_transit(std::size_t r, const LsaInstance& lsa, bool ack) {
    for (std::size_t m : routers_[r].monitors) {
      const auto& mon = topo_.monitors[m];
      if (mon.stub) continue;
      result_.logs[mon.name].push_back(make_event(mon.name, lsa, lsa.age_s, ack, now_));
    }
  }

  bool has_operational_link(std::size_t r) const {
    for (std::size_t link : routers_[r].links)
      if (link_up_[link]) return true;
    return false;
  }

  void flood(std::size_t r, const LsaInstance& lsa, int age_now, std::optional<std::size_t> except) {
    for (std::size_t link : routers_[r].links) {
      if (!link_up_[link] || (except && *except == link)) continue;
      LsaInstance copy = lsa;
      copy.age_s = std::min(kMaxAge, age_now + 1);
      schedule(now_ + sample_delay_us(link), other_end(link, r), Deliver{link, r, other_end(link, r), copy});
    }
  }

  void install(std::size_t r, const LsaInstance& lsa, std::optional<std::size_t> arrived_on) {
    routers_[r].lsdb[lsa.key] = StoredLsa{lsa, now_};
    // An own origination is only seen on the wire if some interface is up.
    if (arrived_on || has_operational_link(r)) record_install(r, lsa, lsa.age_s);
    flood(r, lsa, lsa.age_s, arrived_on);
  }

  void acknowledge(std::size_t r, std::size_t link, const LsaInstance& lsa) {
    if (link == kNoNode) return;
    const std::size_t peer = other_end(link, r);
    const std::int64_t saved = now_;
    now_ += sample_delay_us(link);
    record_transit(peer, lsa, true);
    now_ = saved;
  }

  void arm_refresh(std::size_t r) {
    auto& st = routers_[r];
    double interval = opt_.refresh_s + uniform(-opt_.refresh_jitter_s, opt_.refresh_jitter_s);
    if (st.first_refresh && opt_.stagger_refresh) interval = uniform(0.0, opt_.refresh_s);
    st.first_refresh = false;
    interval = std::max(interval, opt_.min_ls_interval_s);
    schedule(now_ + to_us(interval), r, Originate{r, ++st.refresh_generation, false});
  }

  void originate_now(std::size_t r, bool falsified) {
    auto& st = routers_[r];
    ++st.seq;
    st.falsified = falsified;
    st.last_origination_us = now_;
    LsaInstance lsa;
    lsa.key = LsaKey{1, topo_.routers[r].id, topo_.routers[r].id};
    lsa.seq = st.seq;
    lsa.age_s = 0;
    lsa.digest = link_digest(r, falsified);
    ++result_.stats.originations;
    install(r, lsa, std::nullopt);
    arm_refresh(r);
  }

  void handle(const Originate& o) {
    auto& st = routers_[o.router];
    bool falsified = o.falsified;
    if (o.generation == kDeferredGeneration) {
      if (!st.origination_pending) return;
      st.origination_pending = false;
      falsified = st.pending_falsified;
    } else if (o.generation != 0 && o.generation != st.refresh_generation) {
      return;  // refresh timer was reset by a later origination
    }
    const std::int64_t min_gap = to_us(opt_.min_ls_interval_s);
    if (st.last_origination_us && now_ - *st.last_origination_us < min_gap) {
      // Coalesce everything requested inside MinLSInterval into one origination.
      if (!st.origination_pending) {
        st.origination_pending = true;
        st.pending_falsified = falsified;
        schedule(*st.last_origination_us + min_gap, o.router,
                 Originate{o.router, kDeferredGeneration, falsified});
      } else {
        st.pending_falsified = falsified;
      }
      return;
    }
    st.origination_pending = false;
    originate_now(o.router, falsified);
  }

  void handle(const Deliver& d) {
    if (d.link != kNoNode && !link_up_[d.link]) {
      ++result_.stats.dropped_on_down_link;
      return;
    }
    ++result_.stats.deliveries;
    auto& st = routers_[d.to];
    record_transit(d.to, d.lsa, false);

    // Self-originated LSA: a newer copy we did not send means fight back.
    if (d.lsa.key.adv == topo_.routers[d.to].id && d.lsa.key.type == 1) {
      acknowledge(d.to, d.link, d.lsa);
      if (d.lsa.seq > st.seq) {
        st.seq = d.lsa.seq;
        ++result_.stats.fight_backs;
        originate_now(d.to, st.falsified);
      }
      return;
    }

    auto it = st.lsdb.find(d.lsa.key);
    if (it == st.lsdb.end() || d.lsa.seq > it->second.lsa.seq) {
      acknowledge(d.to, d.link, d.lsa);
      install(d.to, d.lsa, d.link == kNoNode ? std::nullopt : std::optional<std::size_t>(d.link));
      return;
    }
    if (d.lsa.seq == it->second.lsa.seq) {
      // Same instance from two sides: the younger copy wins, nothing is reflooded.
      if (d.lsa.age_s < current_age(it->second)) it->second = StoredLsa{d.lsa, now_};
      acknowledge(d.to, d.link, d.lsa);
    }
    // Older instances are dropped.
  }

  void handle(const Sync& s) {
    if (!link_up_[s.link]) return;
    const auto& l = topo_.links[s.link];
    for (auto [src, dst] : {std::pair{l.a, l.b}, std::pair{l.b, l.a}}) {
      const auto& dst_db = routers_[dst].lsdb;
      for (const auto& [key, stored] : routers_[src].lsdb) {
        auto it = dst_db.find(key);
        if (it != dst_db.end() && it->second.lsa.seq >= stored.lsa.seq) continue;
        // Requested by dst: one LS Update per stale or missing entry.
        LsaInstance copy = stored.lsa;
        copy.age_s = std::min(kMaxAge, current_age(stored) + 1);
        ++result_.stats.sync_updates;
        schedule(now_ + sample_delay_us(s.link), dst, Deliver{s.link, src, dst, copy});
      }
    }
  }

  void set_links(const ScenarioEvent& e, bool up) {
    std::set<std::size_t> touched;
    std::vector<std::size_t> raised;
    for (const auto& iface : e.interfaces) {
      const auto dot = iface.find('.');
      const std::size_t r = *topo_.router_index(iface.substr(0, dot));
      const std::size_t link = *topo_.link_at(r, iface.substr(dot + 1));
      if (link_up_[link] == up) {
        result_.warnings.push_back("t=" + format_seconds(e.time_s) + ": " + iface + " is already " +
                                   (up ? "up" : "down") + "; ignored");
        continue;
      }
      link_up_[link] = up;
      touched.insert(topo_.links[link].a);
      touched.insert(topo_.links[link].b);
      if (up) raised.push_back(link);
    }
    for (std::size_t r : touched) handle(Originate{r, 0, routers_[r].falsified});
    for (std::size_t link : raised) schedule(now_ + to_us(opt_.sync_delay_s), kNoNode, Sync{link});
  }

  std::size_t injection_router(const std::string& attacker) const {
    if (auto r = topo_.router_index(attacker)) return *r;
    return topo_.hosts[*topo_.host_index(attacker)].router;
  }

  void handle(const ScenarioStep& s) {
    const auto& e = scenario_[s.index];
    const double period = std::max(1.0, e.param("period_s", 60.0));
    const int steps = std::max(1, static_cast<int>(std::floor(e.active_duration_s() / period)) + 1);
    const bool last = s.step + 1 >= steps;
    auto next = [&] {
      if (!last) schedule(now_ + to_us(period), kNoNode, ScenarioStep{s.index, s.step + 1});
    };

    switch (e.kind) {
      case ScenarioKind::iface_down: set_links(e, false); return;
      case ScenarioKind::iface_up: set_links(e, true); return;

      case ScenarioKind::attack_partition: {
        // The legitimate originator advertises a false link set; no fight-back.
        const std::size_t r = *topo_.router_index(e.attacker);
        handle(Originate{r, 0, !last});
        if (last) routers_[r].falsified = false;
        next();
        return;
      }

      case ScenarioKind::attack_disguised: {
        const std::size_t attacker = *topo_.router_index(e.attacker);
        const std::size_t victim = *topo_.router_index(e.victim);
        const LsaKey key{1, topo_.routers[victim].id, topo_.routers[victim].id};
        auto it = routers_[attacker].lsdb.find(key);
        const std::int32_t seen = it == routers_[attacker].lsdb.end() ? kInitialSequence : it->second.lsa.seq;
        // Trigger: a false instance on the victim's behalf.
        LsaInstance trigger{key, seen + 1, 0, link_digest(victim, false) ^ 0xbad0bad0ull};
        ++result_.stats.injected;
        inject(attacker, trigger);
        // Disguise: matches the victim's anticipated fight-back (seq + 2).
        // With disguise=0 the trigger is a plain falsification.
        if (e.param("disguise", 1.0) == 0.0) {
          next();
          return;
        }
        LsaInstance disguise{key, seen + 2, 0, link_digest(victim, false)};
        const std::int64_t lead = to_us(e.param("disguise_delay_ms", 1.0) / 1000.0);
        const std::int64_t saved = now_;
        now_ += lead;
        ++result_.stats.injected;
        inject(attacker, disguise);
        now_ = saved;
        next();
        return;
      }

      case ScenarioKind::attack_adjacency_spoof: {
        const auto phantom = Ipv4::parse(e.param_str("phantom", "10.0.0.250")).value_or(Ipv4{0x0a0000fa});
        const std::size_t entry = injection_router(e.attacker);
        LsaInstance lsa{LsaKey{1, phantom, phantom}, kInitialSequence + s.step, 0,
                        0x5900f000ull + static_cast<std::uint64_t>(s.step)};
        ++result_.stats.injected;
        if (topo_.host_index(e.attacker)) {
          lsa.age_s = 1;  // one hop from the host
          handle(Deliver{kNoNode, kNoNode, entry, lsa});
        } else {
          inject(entry, lsa);
        }
        next();
        return;
      }
    }
  }

  // A compromised router installs and floods a crafted instance as its own.
  void inject(std::size_t r, const LsaInstance& lsa) {
    routers_[r].lsdb[lsa.key] = StoredLsa{lsa, now_};
    record_install(r, lsa, lsa.age_s);
    flood(r, lsa, lsa.age_s, std::nullopt);
  }

  static constexpr std::uint64_t kDeferredGeneration = static_cast<std::uint64_t>(-1);

  const Topology& topo_;
  std::vector<ScenarioEvent> scenario_;
  SimOptions opt_;
  std::mt19937_64 rng_;
  std::vector<RouterState> routers_;
  std::vector<bool> link_up_;
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue_;
  std::uint64_t order_ = 0;
  std::int64_t now_ = 0;
  std::int64_t end_us_ = 0;
  SimResult result_;
};

inline SimResult run_simulation(const Topology& topo, const std::vector<ScenarioEvent>& scenario,
                                double duration_s, std::uint64_t seed, SimOptions opt = {}) {
  Simulator sim(topo, scenario, opt, seed);
  return sim.run(duration_s);
}

/// Non-ack LSA arrivals per monitor.
inline std::map<std::string, std::size_t> total_event_counts(
    const std::map<std::string, std::vector<LsaEvent>>& logs) {
  std::map<std::string, std::size_t> out;
  for (const auto& [name, events] : logs)
    out[name] = static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const LsaEvent& e) { return !e.is_ack; }));
  return out;
}

}  // namespace ospf_rqa
