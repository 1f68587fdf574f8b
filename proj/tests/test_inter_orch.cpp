#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "orchsim/inter_orch.hpp"
#include "orchsim/rng.hpp"

using namespace orchsim;

namespace {

TaskIntent intent_of(UseCaseKind kind, std::int64_t users = 10,
                     std::string zone = "z0") {
  TaskIntent i;
  i.kind = kind;
  i.user_count = users;
  i.area_m2 = 1.0;
  i.zone = std::move(zone);
  if (kind == UseCaseKind::virtual_production) {
    i.interaction_class = InteractionClass::remote_music;
  }
  return i;
}

CapabilityRecord cap_of(std::string domain, std::int64_t free_bps,
                        std::int64_t min_latency_us, double reliability,
                        double cost, std::vector<std::string> zones) {
  CapabilityRecord c;
  c.domain = std::move(domain);
  c.free_bps = free_bps;
  c.min_latency_us = min_latency_us;
  c.reliability_floor = reliability;
  c.unit_cost_per_gbps = cost;
  c.prefixes = std::move(zones);
  return c;
}

// Spec-rule reference for select_domains over paths of length <= 2.
std::vector<std::string> oracle_select_domains(
    const TaskIntent& intent, const KpiRequirementSet& kpi,
    const std::vector<CapabilityRecord>& caps,
    const std::vector<Policy>& policies) {
  std::map<std::string, const CapabilityRecord*> by_id;
  std::vector<std::string> ids;
  for (const CapabilityRecord& c : caps) {
    by_id[c.domain] = &c;
    ids.push_back(c.domain);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> ok = apply_policies(ids, intent, policies);

  std::int64_t flow_bps = kpi.peak_throughput_bps();
  double gbps = double(flow_bps) * double(intent.user_count) / 1e9;
  auto zone_ok = [&](const CapabilityRecord& c) {
    return std::find(c.prefixes.begin(), c.prefixes.end(), intent.zone) !=
           c.prefixes.end();
  };

  std::vector<std::vector<std::string>> paths;
  for (const std::string& a : ok) {
    const CapabilityRecord& ca = *by_id[a];
    if (zone_ok(ca) && ca.free_bps >= flow_bps &&
        ca.min_latency_us <= kpi.latency_bound_us &&
        ca.reliability_floor >= kpi.reliability_min) {
      paths.push_back({a});
    }
    for (const std::string& b : ok) {
      if (a == b) continue;
      const CapabilityRecord& cb = *by_id[b];
      if (!zone_ok(cb)) continue;
      if (ca.free_bps < flow_bps || cb.free_bps < flow_bps) continue;
      if (ca.min_latency_us + cb.min_latency_us > kpi.latency_bound_us)
        continue;
      if (ca.reliability_floor * cb.reliability_floor < kpi.reliability_min)
        continue;
      paths.push_back({a, b});
    }
  }
  std::vector<std::string> best;
  double best_cost = 0.0;
  for (const auto& path : paths) {
    double cost = 0.0;
    for (const std::string& d : path) cost += by_id[d]->unit_cost_per_gbps;
    cost *= gbps;
    bool better = best.empty() || cost < best_cost ||
                  (cost == best_cost &&
                   (path.size() < best.size() ||
                    (path.size() == best.size() && path < best)));
    if (better) {
      best = path;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("metaverse preset carries the published bounds") {
  KpiRequirementSet kpi = translate_intent(intent_of(UseCaseKind::metaverse));
  CHECK(kpi.latency_bound_us == 20'000);
  CHECK(kpi.latency_percentile == doctest::Approx(0.99));
  CHECK(kpi.throughput_dl_bps == 5'000'000'000);
  CHECK(kpi.throughput_ul_bps == 5'000'000'000);
  CHECK(kpi.reliability_min == doctest::Approx(0.999999));
  REQUIRE(kpi.positioning_cm.has_value());
  CHECK(*kpi.positioning_cm == doctest::Approx(1.0));
}

TEST_CASE("digital twin preset") {
  KpiRequirementSet kpi =
      translate_intent(intent_of(UseCaseKind::digital_twin));
  CHECK(kpi.latency_bound_us == 20'000);
  CHECK(kpi.throughput_dl_bps == 100'000'000);
  CHECK(kpi.throughput_ul_bps == 50'000'000);
  REQUIRE(kpi.positioning_cm.has_value());
  CHECK(*kpi.positioning_cm == doctest::Approx(10.0));
}

TEST_CASE("factory robotics preset") {
  KpiRequirementSet kpi =
      translate_intent(intent_of(UseCaseKind::factory_robotics));
  CHECK(kpi.latency_bound_us == 20'000);
  CHECK(kpi.throughput_dl_bps == 1'000'000);
  REQUIRE(kpi.positioning_cm.has_value());
  CHECK(*kpi.positioning_cm == doctest::Approx(1.0));
}

TEST_CASE("virtual production latency and jitter follow the class") {
  auto kpi_for = [](InteractionClass cls) {
    TaskIntent i = intent_of(UseCaseKind::virtual_production);
    i.interaction_class = cls;
    return translate_intent(i);
  };
  KpiRequirementSet music = kpi_for(InteractionClass::remote_music);
  CHECK(music.latency_bound_us == 15'000);
  CHECK(*music.jitter_bound_us == 1'000);

  KpiRequirementSet two = kpi_for(InteractionClass::two_way);
  CHECK(two.latency_bound_us == 50'000);
  CHECK(*two.jitter_bound_us == 25'000);

  KpiRequirementSet multi = kpi_for(InteractionClass::multi_way);
  CHECK(multi.latency_bound_us == 150'000);
  CHECK(*multi.jitter_bound_us == 50'000);

  KpiRequirementSet live = kpi_for(InteractionClass::near_live);
  CHECK(live.latency_bound_us == 1'700'000);
  CHECK(!live.jitter_bound_us.has_value());
}

TEST_CASE("single-domain decomposition is the identity") {
  E2eSla sla;
  sla.id = "s";
  sla.kpi = translate_intent(intent_of(UseCaseKind::metaverse));
  sla.domain_path = {"d0"};
  std::vector<CapabilityRecord> caps{
      cap_of("d0", 1'000'000'000'000, 3000, 1.0, 1.0, {"z0"})};
  std::vector<DomainSla> out = decompose_sla(sla, caps);
  REQUIRE(out.size() == 1);
  CHECK(out[0].kpi.latency_bound_us == sla.kpi.latency_bound_us);
  CHECK(out[0].kpi.reliability_min == doctest::Approx(sla.kpi.reliability_min));
  CHECK(out[0].kpi.throughput_dl_bps == sla.kpi.throughput_dl_bps);
}

TEST_CASE("equal latency floors split the bound evenly") {
  E2eSla sla;
  sla.id = "s";
  sla.kpi.latency_bound_us = 20'000;
  sla.kpi.throughput_dl_bps = 1'000'000;
  sla.kpi.throughput_ul_bps = 1'000'000;
  sla.kpi.reliability_min = 0.999;
  sla.domain_path = {"a", "b"};
  std::vector<CapabilityRecord> caps{
      cap_of("a", 1'000'000'000, 2000, 1.0, 1.0, {"z"}),
      cap_of("b", 1'000'000'000, 2000, 1.0, 1.0, {"z"})};
  std::vector<DomainSla> out = decompose_sla(sla, caps);
  REQUIRE(out.size() == 2);
  CHECK(out[0].kpi.latency_bound_us == 10'000);
  CHECK(out[1].kpi.latency_bound_us == 10'000);
}

TEST_CASE("six-nines reliability recomposes over two domains") {
  E2eSla sla;
  sla.id = "s";
  sla.kpi.latency_bound_us = 20'000;
  sla.kpi.throughput_dl_bps = 1;
  sla.kpi.throughput_ul_bps = 1;
  sla.kpi.reliability_min = 0.999999;
  sla.domain_path = {"a", "b"};
  std::vector<CapabilityRecord> caps{
      cap_of("a", 10, 1000, 1.0, 1.0, {"z"}),
      cap_of("b", 10, 3000, 1.0, 1.0, {"z"})};
  std::vector<DomainSla> out = decompose_sla(sla, caps);
  double product = out[0].kpi.reliability_min * out[1].kpi.reliability_min;
  CHECK(out[0].kpi.reliability_min >= std::sqrt(0.999999) - 1e-12);
  CHECK(product >= 0.999999 - 1e-12);
  CHECK(std::fabs(product - 0.999999) <= 1e-12);
}

TEST_CASE("decomposition soundness over random contracts") {
  RngStream rng("decompose", 59);
  for (int round = 0; round < 300; ++round) {
    E2eSla sla;
    sla.id = "s";
    sla.kpi.latency_bound_us = rng.uniform_int(1000, 2'000'000);
    if (rng.bernoulli(0.5)) {
      sla.kpi.jitter_bound_us = rng.uniform_int(100, 100'000);
    }
    sla.kpi.throughput_dl_bps = rng.uniform_int(1, 100'000'000'000);
    sla.kpi.throughput_ul_bps = rng.uniform_int(1, 100'000'000'000);
    sla.kpi.reliability_min = rng.uniform_real(0.9, 0.9999999);
    std::size_t k = std::size_t(rng.uniform_int(1, 2));
    std::vector<CapabilityRecord> caps;
    std::int64_t floor_sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::int64_t floor_us =
          rng.uniform_int(0, sla.kpi.latency_bound_us / std::int64_t(k));
      floor_sum += floor_us;
      sla.domain_path.push_back("d" + std::to_string(i));
      caps.push_back(cap_of("d" + std::to_string(i), 1, floor_us, 1.0, 1.0,
                            {"z"}));
    }
    REQUIRE(floor_sum <= sla.kpi.latency_bound_us);
    std::vector<DomainSla> out = decompose_sla(sla, caps);

    std::int64_t latency_sum = 0;
    std::int64_t jitter_sum = 0;
    double reliability_product = 1.0;
    for (const DomainSla& d : out) {
      latency_sum += d.kpi.latency_bound_us;
      if (d.kpi.jitter_bound_us) jitter_sum += *d.kpi.jitter_bound_us;
      reliability_product *= d.kpi.reliability_min;
      CHECK(d.kpi.throughput_dl_bps == sla.kpi.throughput_dl_bps);
      CHECK(d.kpi.throughput_ul_bps == sla.kpi.throughput_ul_bps);
    }
    CHECK(latency_sum == sla.kpi.latency_bound_us);
    if (sla.kpi.jitter_bound_us) CHECK(jitter_sum == *sla.kpi.jitter_bound_us);
    CHECK(reliability_product >= sla.kpi.reliability_min - 1e-12);
  }
}

TEST_CASE("infeasible latency floors are rejected") {
  E2eSla sla;
  sla.id = "s";
  sla.kpi.latency_bound_us = 1000;
  sla.kpi.throughput_dl_bps = 1;
  sla.kpi.throughput_ul_bps = 1;
  sla.domain_path = {"a", "b"};
  std::vector<CapabilityRecord> caps{cap_of("a", 1, 800, 1.0, 1.0, {"z"}),
                                     cap_of("b", 1, 300, 1.0, 1.0, {"z"})};
  try {
    decompose_sla(sla, caps);
    FAIL("expected InfeasibleBudget");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::infeasible_budget);
  }
}

TEST_CASE("requests of the same nature merge additively") {
  TaskIntent a = intent_of(UseCaseKind::metaverse, 5, "z0");
  TaskIntent b = intent_of(UseCaseKind::metaverse, 7, "z0");
  TaskIntent c = intent_of(UseCaseKind::metaverse, 3, "z1");
  std::vector<TaskIntent> merged = compose_requests({a, b, c});
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].user_count == 12);
  CHECK(merged[0].zone == "z0");
  CHECK(merged[1].user_count == 3);
}

TEST_CASE("composition preserves users per (kind, zone, class)") {
  RngStream rng("compose", 61);
  for (int round = 0; round < 50; ++round) {
    std::vector<TaskIntent> intents;
    std::map<std::string, std::int64_t> before;
    int n = int(rng.uniform_int(1, 20));
    for (int i = 0; i < n; ++i) {
      UseCaseKind kind =
          static_cast<UseCaseKind>(rng.uniform_int(0, 4));
      TaskIntent intent = intent_of(kind, rng.uniform_int(1, 30),
                                    "z" + std::to_string(rng.uniform_int(0, 2)));
      intents.push_back(intent);
      std::string key =
          std::string(use_case_name(intent.kind)) + "|" + intent.zone + "|" +
          (intent.interaction_class
               ? std::string(interaction_name(*intent.interaction_class))
               : "-");
      before[key] += intent.user_count;
    }
    std::map<std::string, std::int64_t> after;
    for (const TaskIntent& m : compose_requests(intents)) {
      std::string key =
          std::string(use_case_name(m.kind)) + "|" + m.zone + "|" +
          (m.interaction_class
               ? std::string(interaction_name(*m.interaction_class))
               : "-");
      after[key] += m.user_count;
    }
    CHECK(before == after);
  }
}

TEST_CASE("the only capable domain is chosen") {
  TaskIntent i = intent_of(UseCaseKind::digital_twin, 2);
  KpiRequirementSet kpi = translate_intent(i);
  std::vector<CapabilityRecord> caps{
      cap_of("d0", 1'000'000'000'000, 500, 1.0, 1.0, {"z0"}),
      cap_of("d1", 1'000'000'000'000, 500, 1.0, 0.5, {"elsewhere"})};
  CHECK(select_domains(i, kpi, caps, {}) == std::vector<std::string>{"d0"});
}

TEST_CASE("cheaper of two capable domains wins") {
  TaskIntent i = intent_of(UseCaseKind::digital_twin, 2);
  KpiRequirementSet kpi = translate_intent(i);
  std::vector<CapabilityRecord> caps{
      cap_of("d0", 1'000'000'000'000, 500, 1.0, 2.0, {"z0"}),
      cap_of("d1", 1'000'000'000'000, 500, 1.0, 1.0, {"z0"})};
  CHECK(select_domains(i, kpi, caps, {}) == std::vector<std::string>{"d1"});
}

TEST_CASE("domain selection equals the exhaustive path oracle") {
  RngStream rng("domains", 67);
  for (int round = 0; round < 400; ++round) {
    TaskIntent i = intent_of(UseCaseKind::digital_twin,
                             rng.uniform_int(1, 40),
                             "z" + std::to_string(rng.uniform_int(0, 1)));
    KpiRequirementSet kpi = translate_intent(i);
    kpi.latency_bound_us = rng.uniform_int(500, 30'000);
    kpi.reliability_min = rng.uniform_real(0.9, 0.99999);
    std::vector<CapabilityRecord> caps;
    for (int d = 0; d < 3; ++d) {
      std::vector<std::string> zones;
      if (rng.bernoulli(0.7)) zones.push_back("z0");
      if (rng.bernoulli(0.5)) zones.push_back("z1");
      caps.push_back(cap_of(
          "d" + std::to_string(d),
          rng.uniform_int(0, 2) * kpi.peak_throughput_bps(),
          rng.uniform_int(100, 25'000), rng.uniform_real(0.95, 1.0),
          rng.uniform_real(0.1, 3.0), zones));
    }
    std::vector<Policy> policies;
    if (rng.bernoulli(0.3)) {
      Policy p;
      p.id = "deny";
      p.priority = 10;
      p.action = PolicyAction::deny;
      p.domains = {"d" + std::to_string(rng.uniform_int(0, 2))};
      policies.push_back(p);
    }
    std::vector<std::string> expect =
        oracle_select_domains(i, kpi, caps, policies);
    if (expect.empty()) {
      CHECK_THROWS_AS(select_domains(i, kpi, caps, policies), SimError);
    } else {
      CHECK(select_domains(i, kpi, caps, policies) == expect);
    }
  }
}

TEST_CASE("selection is invariant under a positive cost rescale") {
  TaskIntent i = intent_of(UseCaseKind::digital_twin, 3);
  KpiRequirementSet kpi = translate_intent(i);
  std::vector<CapabilityRecord> caps{
      cap_of("a", 1'000'000'000'000, 500, 1.0, 2.0, {"z0"}),
      cap_of("b", 1'000'000'000'000, 400, 1.0, 1.5, {"z0"}),
      cap_of("c", 1'000'000'000'000, 300, 1.0, 2.5, {"z0"})};
  std::vector<std::string> base = select_domains(i, kpi, caps, {});
  for (CapabilityRecord& c : caps) c.unit_cost_per_gbps *= 17.0;
  CHECK(select_domains(i, kpi, caps, {}) == base);
}

TEST_CASE("policy filtering is first-match-wins by priority") {
  TaskIntent i = intent_of(UseCaseKind::metaverse, 1);
  std::vector<std::string> candidates{"d0", "d1"};

  CHECK(apply_policies(candidates, i, {}) == candidates);

  Policy deny;
  deny.id = "deny-d1";
  deny.priority = 10;
  deny.action = PolicyAction::deny;
  deny.domains = {"d1"};
  Policy allow;
  allow.id = "allow-d1";
  allow.priority = 5;
  allow.action = PolicyAction::allow;
  allow.domains = {"d1"};
  CHECK(apply_policies(candidates, i, {deny, allow}) ==
        std::vector<std::string>{"d0"});
  // Evaluation order does not depend on input order.
  CHECK(apply_policies(candidates, i, {allow, deny}) ==
        std::vector<std::string>{"d0"});

  Policy allow_all;
  allow_all.id = "allow-all";
  allow_all.priority = 1;
  allow_all.action = PolicyAction::allow;
  CHECK(apply_policies(candidates, i, {allow_all}) == candidates);
}

TEST_CASE("policies can match on kind and zone") {
  Policy p;
  p.id = "p";
  p.priority = 1;
  p.action = PolicyAction::deny;
  p.kinds = {UseCaseKind::metaverse};
  p.zones = {"z0"};
  TaskIntent mv = intent_of(UseCaseKind::metaverse, 1, "z0");
  TaskIntent dt = intent_of(UseCaseKind::digital_twin, 1, "z0");
  TaskIntent mv_z1 = intent_of(UseCaseKind::metaverse, 1, "z1");
  CHECK(apply_policies({"d"}, mv, {p}).empty());
  CHECK(apply_policies({"d"}, dt, {p}) == std::vector<std::string>{"d"});
  CHECK(apply_policies({"d"}, mv_z1, {p}) == std::vector<std::string>{"d"});
}

TEST_CASE("control plans follow the risk table and stay monotone") {
  SecurityControlPlan low = select_controls(RiskLevel::low);
  CHECK(low.did_layers == 1);
  CHECK(low.soc_level == SocLevel::baseline);
  SecurityControlPlan medium = select_controls(RiskLevel::medium);
  CHECK(medium.did_layers == 2);
  CHECK(medium.soc_level == SocLevel::hardened);
  SecurityControlPlan high = select_controls(RiskLevel::high);
  CHECK(high.did_layers == 3);
  CHECK(high.soc_level == SocLevel::rigorous);

  CHECK(low.did_layers <= medium.did_layers);
  CHECK(medium.did_layers <= high.did_layers);
  CHECK(int(low.soc_level) <= int(medium.soc_level));
  CHECK(int(medium.soc_level) <= int(high.soc_level));
}
