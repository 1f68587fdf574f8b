#include <string>

#include "doctest.h"
#include "orchsim/scenario.hpp"

using namespace orchsim;

namespace {

const char* kMinimal = R"({
  "duration_s": 10,
  "domains": [
    {
      "id": "d0",
      "ats": [ { "id": "a0", "kind": "wifi", "coverage": ["z0"] } ]
    }
  ]
})";

}  // namespace

TEST_CASE("a minimal document parses with defaults filled") {
  Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.seed == 0);
  CHECK(sc.duration_s == doctest::Approx(10.0));
  CHECK(sc.domains.size() == 1);
  CHECK(sc.domains[0].ats[0].capacity_bps == 10'000'000'000);  // wifi preset
  CHECK(sc.params.score_weights.w_latency == doctest::Approx(0.5));
  CHECK(sc.params.hysteresis == doctest::Approx(0.05));
  CHECK(sc.params.min_dwell_us == 100 * kUsPerMs);
  CHECK(sc.params.telemetry_capacity == 1024);
  CHECK(!sc.toggles.sleep_policy);
}

TEST_CASE("unknown keys are rejected at any nesting level") {
  std::string top = R"({"duration_s": 1, "frobnicate": 1, "domains": []})";
  try {
    parse_scenario(top);
    FAIL("expected ParseError");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
  }

  std::string nested = R"({
    "duration_s": 1,
    "domains": [
      { "id": "d0", "ats": [ { "id": "a0", "kind": "wifi", "coverage": ["z"], "foo": 3 } ] }
    ]
  })";
  CHECK_THROWS_AS(parse_scenario(nested), SimError);
}

TEST_CASE("malformed json reports a parse error with location context") {
  try {
    parse_scenario("{ \"duration_s\": 1, ");
    FAIL("expected ParseError");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}

TEST_CASE("duplicate AT ids are rejected and named") {
  std::string doc = R"({
    "duration_s": 1,
    "domains": [
      { "id": "d0", "ats": [
        { "id": "dup", "kind": "wifi", "coverage": ["z"] },
        { "id": "dup", "kind": "lifi", "coverage": ["z"] }
      ] }
    ]
  })";
  try {
    parse_scenario(doc);
    FAIL("expected ValidationError");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(std::string(e.what()).find("dup") != std::string::npos);
  }
}

TEST_CASE("scenarios need at least one domain and a positive duration") {
  CHECK_THROWS_AS(parse_scenario(R"({"duration_s": 0, "domains": []})"),
                  SimError);
  CHECK_THROWS_AS(parse_scenario(R"({"duration_s": 5, "domains": []})"),
                  SimError);
}

TEST_CASE("policy priorities must be unique") {
  std::string doc = R"({
    "duration_s": 1,
    "domains": [ { "id": "d0", "ats": [ { "id": "a", "kind": "wifi", "coverage": ["z"] } ] } ],
    "policies": [
      { "id": "p0", "issuer": "business", "priority": 3, "action": "allow" },
      { "id": "p1", "issuer": "customer", "priority": 3, "action": "deny" }
    ]
  })";
  CHECK_THROWS_AS(parse_scenario(doc), SimError);
}

TEST_CASE("load-serialize-load is the identity on the canonical form") {
  std::string full = R"({
    "seed": 99,
    "duration_s": 12.5,
    "toggles": { "sleep_policy": true, "explain": true },
    "params": { "hysteresis": 0.1, "ewma_alpha": 0.25 },
    "domains": [
      {
        "id": "d0",
        "unit_cost_per_gbps": 1.5,
        "ats": [
          { "id": "a0", "kind": "satellite", "coverage": ["z0", "z1"],
            "per_error_rate": 0.001 }
        ],
        "nodes": [
          { "id": "n0", "tier": "core", "cpu_units": 128, "mem_mb": 262144 }
        ]
      }
    ],
    "policies": [
      { "id": "p0", "issuer": "regulator", "priority": 7, "action": "deny",
        "kinds": ["metaverse"], "zones": ["z0"], "domains": ["d0"] }
    ],
    "workloads": [
      { "name": "w0", "kind": "virtual_production", "user_count": 2,
        "area_m2": 4.0, "duration_s": 10,
        "arrival": { "poisson": { "rate_per_s": 0.5 } },
        "zone": "z0", "interaction_class": "two_way", "risk": "medium",
        "kpi_override": { "latency_bound_us": 42000 } }
    ]
  })";
  Scenario first = parse_scenario(full);
  std::string canon = scenario_to_json(first);
  Scenario second = parse_scenario(canon);
  CHECK(scenario_to_json(second) == canon);

  CHECK(second.seed == 99);
  CHECK(second.toggles.sleep_policy);
  CHECK(second.params.hysteresis == doctest::Approx(0.1));
  CHECK(second.domains[0].ats[0].per_error_rate == doctest::Approx(0.001));
  REQUIRE(second.workloads[0].kpi_override.has_value());
  CHECK(*second.workloads[0].kpi_override->latency_bound_us == 42000);
  CHECK(second.workloads[0].arrival.kind == ArrivalKind::poisson);
}

TEST_CASE("invalid enumeration values are rejected") {
  std::string doc = R"({
    "duration_s": 1,
    "domains": [ { "id": "d0", "ats": [ { "id": "a", "kind": "carrier-pigeon", "coverage": ["z"] } ] } ]
  })";
  CHECK_THROWS_AS(parse_scenario(doc), SimError);
}

TEST_CASE("virtual production workloads need an interaction class") {
  std::string doc = R"({
    "duration_s": 1,
    "domains": [ { "id": "d0", "ats": [ { "id": "a", "kind": "wifi", "coverage": ["z"] } ] } ],
    "workloads": [
      { "name": "w", "kind": "virtual_production", "user_count": 1,
        "area_m2": 1.0, "duration_s": 1, "zone": "z" }
    ]
  })";
  CHECK_THROWS_AS(parse_scenario(doc), SimError);
}
