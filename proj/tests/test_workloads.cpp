#include <cmath>
#include <set>

#include "doctest.h"
#include "orchsim/rng.hpp"
#include "orchsim/workloads.hpp"

using namespace orchsim;

namespace {

UseCaseSpec spec_of(UseCaseKind kind, std::int64_t users, double area) {
  UseCaseSpec s;
  s.name = "wl";
  s.kind = kind;
  s.user_count = users;
  s.area_m2 = area;
  s.duration_s = 30.0;
  s.zone = "z0";
  if (kind == UseCaseKind::virtual_production) {
    s.interaction_class = InteractionClass::remote_music;
  }
  return s;
}

}  // namespace

TEST_CASE("ten metaverse users yield ten symmetric flows in band") {
  RngStream rng("mv", 1);
  GeneratedWorkload g = gen_metaverse(spec_of(UseCaseKind::metaverse, 10, 1.0),
                                      rng);
  CHECK(g.flows.size() == 10);
  for (const FlowTemplate& f : g.flows) {
    CHECK(f.demand_bps >= 5'000'000'000);
    CHECK(f.demand_bps <= 100'000'000'000);
    CHECK(f.kpi.throughput_dl_bps == f.kpi.throughput_ul_bps);
    CHECK_NOTHROW(f.kpi.validate("flow"));
    CHECK(f.arrival_us == 0);  // all_at_start default
    CHECK(f.release_us == seconds(30));
  }
}

TEST_CASE("zero users violate the intent invariant") {
  RngStream rng("mv", 1);
  UseCaseSpec s = spec_of(UseCaseKind::metaverse, 0, 1.0);
  CHECK_THROWS_AS(gen_metaverse(s, rng), SimError);
}

TEST_CASE("fixed seeds regenerate identical flow lists") {
  UseCaseSpec s = spec_of(UseCaseKind::metaverse, 25, 2.0);
  RngStream a("same", 9);
  RngStream b("same", 9);
  GeneratedWorkload ga = gen_metaverse(s, a);
  GeneratedWorkload gb = gen_metaverse(s, b);
  REQUIRE(ga.flows.size() == gb.flows.size());
  for (std::size_t i = 0; i < ga.flows.size(); ++i) {
    CHECK(ga.flows[i].id == gb.flows[i].id);
    CHECK(ga.flows[i].demand_bps == gb.flows[i].demand_bps);
    CHECK(ga.flows[i].arrival_us == gb.flows[i].arrival_us);
  }
}

TEST_CASE("density outside the published band only warns") {
  RngStream rng("mv", 2);
  GeneratedWorkload sparse =
      gen_metaverse(spec_of(UseCaseKind::metaverse, 2, 10.0), rng);
  bool found = false;
  for (const std::string& w : sparse.warnings) {
    if (w.find("density") != std::string::npos) found = true;
  }
  CHECK(found);
  CHECK(sparse.flows.size() == 2);
}

TEST_CASE("virtual production emits three streams per user plus a trunk") {
  RngStream rng("vp", 3);
  UseCaseSpec s = spec_of(UseCaseKind::virtual_production, 4, 1.0);
  GeneratedWorkload g = gen_virtual_production(s, rng);
  REQUIRE(g.flows.size() == 4 * 3 + 1);

  int uhd = 0, audio = 0, anc = 0;
  for (const FlowTemplate& f : g.flows) {
    if (f.id.find(".uhd") != std::string::npos) {
      ++uhd;
      CHECK(f.demand_bps >= 20'000'000);
      CHECK(f.demand_bps <= 50'000'000);
      CHECK(f.kpi.latency_bound_us == 15'000);
      CHECK(*f.kpi.jitter_bound_us == 1'000);
    } else if (f.id.find(".audio") != std::string::npos) {
      ++audio;
      CHECK(f.demand_bps >= 48'000);
      CHECK(f.demand_bps <= 3'000'000);
    } else if (f.id.find(".anc") != std::string::npos) {
      ++anc;
      CHECK(f.demand_bps == 64'000);
    }
  }
  CHECK(uhd == 4);
  CHECK(audio == 4);
  CHECK(anc == 4);

  const FlowTemplate& trunk = g.flows.back();
  CHECK(trunk.id == "wl.trunk");
  CHECK(trunk.demand_bps == 10'000'000'000);
  CHECK(trunk.kpi.latency_bound_us == 50'000);
  CHECK(*trunk.kpi.jitter_bound_us == 10'000);
}

TEST_CASE("digital twin flows stay inside both direction bands") {
  RngStream rng("dt", 4);
  GeneratedWorkload g =
      gen_digital_twin(spec_of(UseCaseKind::digital_twin, 30, 30.0), rng);
  CHECK(g.flows.size() == 30);
  for (const FlowTemplate& f : g.flows) {
    CHECK(f.demand_bps >= 100'000'000);     // at least the DL floor
    CHECK(f.demand_bps <= 10'000'000'000);  // at most the DL ceiling
  }
}

TEST_CASE("factory generators pin the table rates") {
  RngStream rng("fy", 5);
  GeneratedWorkload dt =
      gen_factory(spec_of(UseCaseKind::factory_dt, 3, 3.0), rng);
  for (const FlowTemplate& f : dt.flows) {
    CHECK(f.demand_bps == 1'000'000'000);
    CHECK(*f.kpi.positioning_cm == doctest::Approx(10.0));
  }
  GeneratedWorkload robots =
      gen_factory(spec_of(UseCaseKind::factory_robotics, 3, 3.0), rng);
  for (const FlowTemplate& f : robots.flows) {
    CHECK(f.demand_bps == 1'000'000);
    CHECK(f.kpi.latency_bound_us == 20'000);
    CHECK(*f.kpi.positioning_cm == doctest::Approx(1.0));
  }
}

TEST_CASE("generators reject mismatched kinds") {
  RngStream rng("k", 6);
  UseCaseSpec s = spec_of(UseCaseKind::metaverse, 1, 1.0);
  try {
    gen_digital_twin(s, rng);
    FAIL("expected KindMismatch");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::kind_mismatch);
  }
}

TEST_CASE("poisson arrivals are ordered, span the window, and match the rate") {
  UseCaseSpec s = spec_of(UseCaseKind::digital_twin, 10'000, 10'000.0);
  s.duration_s = 1e9;  // effectively unclipped
  s.arrival.kind = ArrivalKind::poisson;
  s.arrival.rate_per_s = 2.0;
  RngStream rng("poisson", 7);
  GeneratedWorkload g = gen_digital_twin(s, rng);

  double sum_gaps_s = 0.0;
  SimTime prev = 0;
  for (const FlowTemplate& f : g.flows) {
    CHECK(f.arrival_us >= prev);
    sum_gaps_s += double(f.arrival_us - prev) / double(kUsPerSec);
    prev = f.arrival_us;
  }
  double mean_gap = sum_gaps_s / double(g.flows.size());
  CHECK(std::fabs(mean_gap - 0.5) <= 0.05 * 0.5);
}

TEST_CASE("arrivals clip to the workload window") {
  UseCaseSpec s = spec_of(UseCaseKind::digital_twin, 50, 50.0);
  s.duration_s = 5.0;
  s.arrival.kind = ArrivalKind::poisson;
  s.arrival.rate_per_s = 1.0;  // expected span 50 s, clipped at 5 s
  RngStream rng("clip", 8);
  GeneratedWorkload g = gen_digital_twin(s, rng);
  for (const FlowTemplate& f : g.flows) {
    CHECK(f.arrival_us <= seconds(5));
    CHECK(f.release_us == seconds(5));
  }
}

TEST_CASE("overrides replace preset bounds and drive demand") {
  UseCaseSpec s = spec_of(UseCaseKind::metaverse, 5, 1.0);
  KpiOverride o;
  o.throughput_dl_bps = 5'000'000'000;
  o.throughput_ul_bps = 5'000'000'000;
  o.latency_bound_us = 10'000;
  s.kpi_override = o;
  RngStream rng("ov", 9);
  GeneratedWorkload g = gen_metaverse(s, rng);
  for (const FlowTemplate& f : g.flows) {
    CHECK(f.demand_bps == 5'000'000'000);
    CHECK(f.kpi.latency_bound_us == 10'000);
  }
}
