#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "orchsim/intra_orch.hpp"
#include "orchsim/rng.hpp"

using namespace orchsim;

namespace {

ComputeNode node_of(std::string id, std::int64_t cpu, std::int64_t mem,
                    double p_idle = 100.0, double p_max = 300.0) {
  ComputeNode n;
  n.id = std::move(id);
  n.tier = NodeTier::edge;
  n.cpu_units = cpu;
  n.mem_mb = mem;
  n.power = {p_idle, p_max, 10.0};
  return n;
}

ServiceChain chain_of(std::vector<std::int64_t> cpus,
                      std::int64_t mem_each = 1024) {
  ServiceChain c;
  c.id = "chain";
  for (std::int64_t cpu : cpus) {
    c.functions.push_back(ServiceFunction{cpu, mem_each, 1'000'000});
  }
  return c;
}

// Exhaustive reference over every assignment vector, mirroring the cost
// law: marginal power + lambda * inter-node hop latency.
struct OracleBest {
  bool feasible = false;
  double cost = 0.0;
  std::vector<std::string> assignment;
};

OracleBest oracle_place(const IntraOrch& orch, const ServiceChain& chain,
                        double lambda, std::int64_t hop_us) {
  std::vector<std::string> ids;
  for (const auto& [id, n] : orch.nodes()) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  OracleBest best;
  std::vector<std::size_t> idx(chain.functions.size(), 0);
  while (true) {
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> use;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      use[ids[idx[i]]].first += chain.functions[i].cpu_units;
      use[ids[idx[i]]].second += chain.functions[i].mem_mb;
    }
    bool ok = true;
    for (const auto& [id, u] : use) {
      const ComputeNode& n = orch.node(id);
      if (u.first > n.free_cpu() || u.second > n.free_mem()) ok = false;
    }
    if (ok) {
      double power = 0.0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const ComputeNode& n = orch.node(ids[idx[i]]);
        power += (n.power.p_max_w - n.power.p_idle_w) *
                 (double(chain.functions[i].cpu_units) / double(n.cpu_units));
      }
      std::int64_t latency = 0;
      for (std::size_t i = 1; i < idx.size(); ++i) {
        if (idx[i] != idx[i - 1]) latency += hop_us;
      }
      double cost = power + lambda * double(latency);
      if (!best.feasible || cost < best.cost) {
        best.feasible = true;
        best.cost = cost;
        best.assignment.clear();
        for (std::size_t i : idx) best.assignment.push_back(ids[i]);
      }
    }
    std::size_t pos = idx.size();
    bool done = true;
    while (pos-- > 0) {
      if (++idx[pos] < ids.size()) {
        done = false;
        break;
      }
      idx[pos] = 0;
    }
    if (done) break;
  }
  return best;
}

}  // namespace

TEST_CASE("single function lands on the single fitting node") {
  AccessNet net("d");
  IntraOrch orch("d", net);
  orch.add_node(node_of("n0", 8, 8192, 100.0, 300.0));
  ServiceChain c = chain_of({2});
  PlacementPlan plan = orch.place_service(c);
  CHECK(plan.assignments == std::vector<std::string>{"n0"});
  // Marginal power: (300-100) * 2/8 = 50 W; no inter-node latency.
  CHECK(plan.cost == doctest::Approx(50.0));
  CHECK(plan.est_latency_us == 0);
  CHECK(orch.node("n0").committed_cpu == 2);
}

TEST_CASE("oversized functions have no feasible placement") {
  AccessNet net("d");
  IntraOrch orch("d", net);
  orch.add_node(node_of("n0", 4, 8192));
  orch.add_node(node_of("n1", 4, 8192));
  ServiceChain c = chain_of({8});
  try {
    orch.place_service(c);
    FAIL("expected NoFeasiblePlacement");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::no_feasible_placement);
  }
}

TEST_CASE("random 3x3 instances equal the exhaustive oracle cost exactly") {
  RngStream rng("place", 83);
  for (int round = 0; round < 300; ++round) {
    AccessNet net("d");
    IntraOrch orch("d", net, 1.0, 0.001, 200);
    int nodes = int(rng.uniform_int(1, 4));
    for (int i = 0; i < nodes; ++i) {
      orch.add_node(node_of("n" + std::to_string(i), rng.uniform_int(1, 16),
                            rng.uniform_int(512, 8192),
                            double(rng.uniform_int(50, 200)),
                            double(rng.uniform_int(200, 800))));
    }
    int fns = int(rng.uniform_int(1, 3));
    std::vector<std::int64_t> cpus;
    for (int i = 0; i < fns; ++i) cpus.push_back(rng.uniform_int(1, 8));
    ServiceChain c = chain_of(cpus, rng.uniform_int(128, 2048));

    OracleBest expect = oracle_place(orch, c, 0.001, 200);
    if (!expect.feasible) {
      CHECK_THROWS_AS(orch.plan_service(c), SimError);
      continue;
    }
    PlacementPlan plan = orch.plan_service(c);
    CHECK(plan.cost == expect.cost);
    CHECK(plan.assignments == expect.assignment);
  }
}

TEST_CASE("cost ties resolve to the lexicographically smallest assignment") {
  AccessNet net("d");
  IntraOrch orch("d", net);
  orch.add_node(node_of("a", 8, 8192));
  orch.add_node(node_of("b", 8, 8192));
  PlacementPlan plan = orch.plan_service(chain_of({2}));
  CHECK(plan.assignments == std::vector<std::string>{"a"});
}

TEST_CASE("ewma prediction follows the recurrence") {
  std::vector<ResourceUsage> history{{4, 4, 4}, {8, 8, 8}};
  Profile p = profile_predict(history, 0.5);
  CHECK(p.predicted.cpu_units == doctest::Approx(6.0));
  CHECK(p.predicted.mem_mb == doctest::Approx(6.0));
  CHECK(p.predicted.egress_bps == doctest::Approx(6.0));
}

TEST_CASE("ewma of a constant history is that constant") {
  std::vector<ResourceUsage> history(10, ResourceUsage{3.5, 7.0, 9.0});
  Profile p = profile_predict(history, 0.3);
  CHECK(p.predicted.cpu_units == doctest::Approx(3.5));
}

TEST_CASE("alpha one tracks the last observation") {
  std::vector<ResourceUsage> history{{1, 1, 1}, {9, 9, 9}, {4, 4, 4}};
  Profile p = profile_predict(history, 1.0);
  CHECK(p.predicted.cpu_units == doctest::Approx(4.0));
}

TEST_CASE("ewma stays inside the history envelope") {
  RngStream rng("ewma", 19);
  for (int round = 0; round < 100; ++round) {
    std::vector<ResourceUsage> history;
    double lo = 1e18, hi = -1e18;
    int n = int(rng.uniform_int(1, 50));
    for (int i = 0; i < n; ++i) {
      double v = rng.uniform_real(0, 100);
      history.push_back({v, v, v});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    Profile p = profile_predict(history, rng.uniform_real(0.01, 1.0));
    CHECK(p.predicted.cpu_units >= lo - 1e-9);
    CHECK(p.predicted.cpu_units <= hi + 1e-9);
  }
}

TEST_CASE("empty histories are rejected") {
  try {
    profile_predict({}, 0.5);
    FAIL("expected EmptyHistory");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::empty_history);
  }
}

TEST_CASE("scaling dead band and thresholds") {
  AccessNet net("d");
  IntraOrch orch("d", net);
  orch.add_node(node_of("n0", 64, 65536));
  ServiceChain c = chain_of({8});
  PlacementPlan plan = orch.place_service(c);

  // 50% of allocation: inside the dead band.
  Profile mid{{4.0, 512.0, 500'000.0}, 0.5};
  CHECK(orch.scale_service(c, mid, plan).empty());

  // 90% of allocation with headroom: scale up to 1.125x the allocation.
  Profile hot{{7.2, 921.6, 900'000.0}, 0.5};
  std::vector<ScaleAction> up = orch.scale_service(c, hot, plan);
  REQUIRE(up.size() == 1);
  CHECK(up[0].type == ScaleActionType::scale_up);
  CHECK(up[0].target_cpu == 9);  // ceil(1.25 * 7.2)
  orch.apply_scale(c, plan, up[0]);
  CHECK(c.functions[0].cpu_units == 9);
  CHECK(orch.node("n0").committed_cpu == 9);

  // Well below 30%: scale down towards 1.25x the prediction.
  Profile cold{{1.0, 128.0, 100'000.0}, 0.5};
  std::vector<ScaleAction> down = orch.scale_service(c, cold, plan);
  REQUIRE(down.size() == 1);
  CHECK(down[0].type == ScaleActionType::scale_down);
  CHECK(down[0].target_cpu == 2);  // ceil(1.25 * 1.0 / 9 * 9)
}

TEST_CASE("scale-up on a full node asks for re-placement") {
  AccessNet net("d");
  IntraOrch orch("d", net);
  orch.add_node(node_of("n0", 8, 65536));
  ServiceChain c = chain_of({8});
  PlacementPlan plan = orch.place_service(c);
  Profile hot{{7.6, 900.0, 900'000.0}, 0.5};
  std::vector<ScaleAction> actions = orch.scale_service(c, hot, plan);
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].type == ScaleActionType::re_place);
}

TEST_CASE("capability advertisement reflects live state and is pure") {
  AccessNet net("d");
  AccessTech at = at_preset(AtKind::wifi, "w0");
  at.capacity_bps = 10'000'000'000;
  at.base_latency_us = 2000;
  at.per_error_rate = 0.001;
  at.coverage = {"z0", "z1"};
  net.add_at(at);
  AccessTech at2 = at_preset(AtKind::fibre, "f0");
  at2.base_latency_us = 150;
  at2.coverage = {"z1"};
  net.add_at(at2);

  IntraOrch orch("d", net, 2.5);
  CapabilityRecord before = orch.advertise_capabilities();
  CHECK(before.free_bps == 400'000'000'000);
  CHECK(before.min_latency_us == 150);
  CHECK(before.unit_cost_per_gbps == doctest::Approx(2.5));
  CHECK(before.prefixes == std::vector<std::string>{"z0", "z1"});

  // Min-latency fold oracle over active ATs.
  std::int64_t oracle_min = std::min<std::int64_t>(2000, 150);
  CHECK(before.min_latency_us == oracle_min);
  CHECK(before.reliability_floor == doctest::Approx(1.0));  // fibre is clean

  CapabilityRecord again = orch.advertise_capabilities();
  CHECK(again.free_bps == before.free_bps);
  CHECK(again.min_latency_us == before.min_latency_us);
  CHECK(again.prefixes == before.prefixes);

  Flow f;
  f.id = "f";
  f.demand_bps = 5'000'000'000;
  net.admit_flow("w0", f, 5'000'000'000);
  net.set_sleep("f0", false);
  CapabilityRecord after = orch.advertise_capabilities();
  CHECK(after.free_bps == 400'000'000'000);  // fibre still the best path
  net.release_flow("w0", "f");

  // With just the wifi AT, an admission drops free capacity by its share.
  AccessNet net2("d2");
  AccessTech solo = at_preset(AtKind::wifi, "w");
  solo.capacity_bps = 10'000'000'000;
  solo.coverage = {"z"};
  net2.add_at(solo);
  IntraOrch orch2("d2", net2);
  CHECK(orch2.advertise_capabilities().free_bps == 10'000'000'000);
  net2.admit_flow("w", f, 5'000'000'000);
  CHECK(orch2.advertise_capabilities().free_bps == 5'000'000'000);
}

TEST_CASE("compute commitments survive place/scale/release sequences") {
  RngStream rng("compute-ops", 91);
  AccessNet net("d");
  IntraOrch orch("d", net);
  for (int i = 0; i < 3; ++i) {
    orch.add_node(node_of("n" + std::to_string(i), 32, 32768));
  }
  std::vector<std::pair<ServiceChain, PlacementPlan>> live;
  for (int step = 0; step < 500; ++step) {
    if (rng.bernoulli(0.6)) {
      ServiceChain c = chain_of({rng.uniform_int(1, 8), rng.uniform_int(1, 8)},
                                rng.uniform_int(128, 4096));
      c.id = "c" + std::to_string(step);
      try {
        PlacementPlan plan = orch.place_service(c);
        live.emplace_back(c, plan);
      } catch (const SimError& e) {
        CHECK(e.code() == Errc::no_feasible_placement);
      }
    } else if (!live.empty()) {
      std::size_t pick = std::size_t(
          rng.uniform_int(0, std::int64_t(live.size()) - 1));
      orch.release_service(live[pick].first, live[pick].second);
      live.erase(live.begin() + std::ptrdiff_t(pick));
    }
    std::map<std::string, std::int64_t> shadow_cpu;
    for (const auto& [c, plan] : live) {
      for (std::size_t i = 0; i < c.functions.size(); ++i) {
        shadow_cpu[plan.assignments[i]] += c.functions[i].cpu_units;
      }
    }
    for (const auto& [id, n] : orch.nodes()) {
      CHECK(n.committed_cpu == shadow_cpu[id]);
      CHECK(n.committed_cpu <= n.cpu_units);
      CHECK(n.committed_mem <= n.mem_mb);
    }
  }
}
