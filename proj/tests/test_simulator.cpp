#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ospf_rqa/simulator.hpp"
#include "topogen.hpp"

using namespace ospf_rqa;

namespace {

std::string dump(const SimResult& r) {
  std::string out;
  for (const auto& [name, log] : r.logs)
    for (const auto& e : log) out += format_event_line(e) + "\n";
  return out;
}

std::size_t non_ack_between(const std::vector<LsaEvent>& log, double t0, double t1) {
  std::size_t n = 0;
  for (const auto& e : log)
    if (!e.is_ack && e.ts_us >= t0 * 1e6 && e.ts_us < t1 * 1e6) ++n;
  return n;
}

const char* kPair =
    "router a id=1.1.1.1\nrouter b id=2.2.2.2\nlink a.eth0 b.eth0\nmonitor m attach=b stub\n";

}  // namespace

TEST(Simulator, SameSeedSameBytes) {
  const auto topo = load_topology("paper16");
  const auto a = run_simulation(topo, scenario_paper_attacks(), 12000, 5);
  const auto b = run_simulation(topo, scenario_paper_attacks(), 12000, 5);
  EXPECT_EQ(dump(a), dump(b));
  const auto c = run_simulation(topo, scenario_paper_attacks(), 12000, 6);
  EXPECT_NE(dump(a), dump(c));
}

// Both routers originate at 0 and refresh once before 1770 + 1770 s.
TEST(Simulator, TwoRouterOriginationCount) {
  const auto topo = parse_topology(std::string_view(kPair));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = run_simulation(topo, {}, 3540, seed);
    const auto& log = r.logs.at("m");
    EXPECT_EQ(non_ack_between(log, 0, 3540), 4u) << "seed " << seed;
    EXPECT_EQ(non_ack_between(log, 0, 1), 2u);
    EXPECT_EQ(non_ack_between(log, 1770, 1830.1), 2u);
    for (const auto& e : log) EXPECT_EQ(e.ls_type, 1);
  }
}

TEST(Simulator, AcksAreLoggedAlongsideInstalls) {
  const auto topo = parse_topology(std::string_view(kPair));
  const auto r = run_simulation(topo, {}, 100, 1);
  const auto& log = r.logs.at("m");
  std::size_t acks = 0;
  for (const auto& e : log) acks += e.is_ack ? 1 : 0;
  EXPECT_EQ(acks * 2, log.size());
}

// Stub monitors see equal totals in quiet runs, across link flaps that keep
// the graph connected, and under partition and spoofing attacks.
TEST(Simulator, ConservationAcrossStubMonitors) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 16; ++trial) {
    const auto topo = topogen::random_topology(rng);
    const auto scenario = topogen::non_isolating_scenario(rng, topo, trial % 4);
    const auto r = run_simulation(topo, scenario, 4000, rng());
    const auto totals = total_event_counts(r.logs);
    ASSERT_FALSE(totals.empty());
    const auto first = totals.begin()->second;
    EXPECT_GT(first, 0u);
    for (const auto& [name, n] : totals) EXPECT_EQ(n, first) << "trial " << trial << " monitor " << name;
  }
}

// Every instance a monitor records was originated by a router or injected by
// the scenario; monitors add nothing of their own.
TEST(Simulator, MonitorsNeverOriginate) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    const auto topo = topogen::random_topology(rng);
    const auto r = run_simulation(topo, {}, 5000, rng());
    std::set<std::pair<std::uint32_t, std::int32_t>> instances;
    std::set<std::uint32_t> router_ids;
    for (const auto& rt : topo.routers) router_ids.insert(rt.id.value);
    for (const auto& [name, log] : r.logs)
      for (const auto& e : log) {
        EXPECT_TRUE(router_ids.count(e.adv_router.value)) << name;
        if (!e.is_ack) instances.insert({e.adv_router.value, e.ls_seq});
      }
    EXPECT_EQ(instances.size(), r.stats.originations);
  }
}

TEST(Simulator, AgeAtLeastHopCount) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const auto topo = topogen::random_topology(rng);
    const auto r = run_simulation(topo, {}, 4000, rng());
    for (const auto& m : topo.monitors) {
      const auto dist = topogen::hops_from(topo, m.router);
      for (const auto& e : r.logs.at(m.name)) {
        const auto origin = *topo.router_index(*topo.router_name(e.adv_router));
        EXPECT_GE(e.ls_age, dist[origin] + 1) << m.name << " from " << e.adv_router.str();
      }
    }
  }
}

TEST(Simulator, IsolatedMonitorGoesQuiet) {
  const auto topo = load_topology("paper16");
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto r = run_simulation(topo, scenario_paper_failure(), 100000, seed);
    EXPECT_EQ(non_ack_between(r.logs.at("r14"), 72001, 86400), 0u);
    // Restore: r14's own LSA, its neighbours' and the database exchange.
    EXPECT_GE(non_ack_between(r.logs.at("r14"), 86400, 86402), 3u);
    EXPECT_GT(r.stats.sync_updates, 0u);
    const auto totals = total_event_counts(r.logs);
    for (const auto& [name, n] : totals) {
      if (name == "r14") continue;
      EXPECT_EQ(n, totals.at("rcs1")) << name;
      EXPECT_LT(totals.at("r14"), n);
    }
  }
}

TEST(Simulator, RepeatedDownIsWarnedAndIgnored) {
  const auto topo = load_topology("paper16");
  ScenarioEvent down;
  down.time_s = 100;
  down.interfaces = {"abr1.eth0"};
  auto twice = down;
  twice.time_s = 200;
  const auto once = run_simulation(topo, {down}, 3000, 3);
  const auto dup = run_simulation(topo, {down, twice}, 3000, 3);
  ASSERT_EQ(dup.warnings.size(), 1u);
  EXPECT_NE(dup.warnings[0].find("already down"), std::string::npos);
  EXPECT_EQ(dump(once), dump(dup));
}

// A plain falsification of r7's LSA is answered by r7 and the fresh
// instance reaches every monitor within diameter x max link delay.
TEST(Simulator, FightBackReachesEveryMonitor) {
  const auto topo = load_topology("paper16");
  ScenarioEvent e;
  e.time_s = 3000;
  e.kind = ScenarioKind::attack_disguised;
  e.attacker = "r8";
  e.victim = "r7";
  e.params = {{"disguise", 0}, {"duration_s", 0.0}};
  int diameter = 0;
  for (std::size_t r = 0; r < topo.routers.size(); ++r)
    for (int d : topogen::hops_from(topo, r)) diameter = std::max(diameter, d);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = run_simulation(topo, {e}, 3600, seed);
    EXPECT_EQ(r.stats.fight_backs, 1u);
    const auto victim = *Ipv4::parse("10.0.0.7");
    // The victim never installs the trigger; its monitor records only the
    // fight-back, two sequence numbers past the last legitimate instance.
    std::optional<LsaEvent> fresh;
    std::int32_t before = 0;
    for (const auto& ev : r.logs.at("r7")) {
      if (ev.is_ack || ev.adv_router != victim) continue;
      if (ev.ts_us < 3'000'000'000) {
        before = ev.ls_seq;
        continue;
      }
      fresh = ev;
      break;
    }
    ASSERT_TRUE(fresh) << "seed " << seed;
    EXPECT_EQ(fresh->ls_seq, before + 2);
    const std::int64_t bound = fresh->ts_us + diameter * 20'000;
    for (const auto& [name, log] : r.logs) {
      bool seen = false;
      for (const auto& ev : log)
        seen = seen || (!ev.is_ack && ev.adv_router == victim && ev.ls_seq == fresh->ls_seq && ev.ts_us <= bound);
      EXPECT_TRUE(seen) << name << " seed " << seed;
    }
  }
}

TEST(Simulator, DisguisedVictimFightsBackOncePerRound) {
  const auto topo = load_topology("paper16");
  const auto r = run_simulation(topo, {scenario_paper_attacks()[0]}, 4000, 1);
  EXPECT_EQ(r.stats.injected, 2 * r.stats.fight_backs);
  EXPECT_EQ(r.stats.fight_backs, 16u);
}

TEST(Simulator, EmptyLogsGiveZeros) {
  std::map<std::string, std::vector<LsaEvent>> logs{{"a", {}}, {"b", {}}};
  const auto t = total_event_counts(logs);
  EXPECT_EQ(t.at("a"), 0u);
  EXPECT_EQ(t.at("b"), 0u);
}

TEST(Simulator, RejectsBadInputs) {
  const auto topo = load_topology("paper16");
  EXPECT_THROW(run_simulation(topo, {}, 0, 1), std::invalid_argument);
  EXPECT_THROW(run_simulation(topo, scenario_paper_failure(), 1000, 1), ValidationError);
}
