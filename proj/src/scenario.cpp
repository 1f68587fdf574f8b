/*
 * Copyright 2026 The orchsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "orchsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace orchsim {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    require(allowed.count(it.key()) > 0, Errc::parse_error,
            "unknown key \"" + it.key() + "\" in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(Errc::validation_error, "field \"" + key + "\": " + e.what());
  }
}

template <typename T>
T get_required(const json& obj, const std::string& key,
               const std::string& where) {
  require(obj.contains(key), Errc::validation_error,
          where + ": missing required field \"" + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(Errc::validation_error,
         where + ": field \"" + key + "\": " + e.what());
  }
}

AccessTech parse_at(const json& j) {
  reject_unknown_keys(j, {"id", "kind", "capacity_bps", "base_latency_us",
                          "jitter_span_us", "per_error_rate", "coverage",
                          "power", "positioning_cm", "sync_accuracy_us"},
                      "at");
  std::string id = get_required<std::string>(j, "id", "at");
  std::string kind_s = get_required<std::string>(j, "kind", "at " + id);
  auto kind = at_kind_from_name(kind_s);
  require(kind.has_value(), Errc::validation_error,
          "at " + id + ": unknown kind \"" + kind_s + "\"");

  AccessTech at = at_preset(*kind, id);
  at.capacity_bps = get_or<std::int64_t>(j, "capacity_bps", at.capacity_bps);
  at.base_latency_us =
      get_or<std::int64_t>(j, "base_latency_us", at.base_latency_us);
  at.jitter_span_us =
      get_or<std::int64_t>(j, "jitter_span_us", at.jitter_span_us);
  at.per_error_rate = get_or<double>(j, "per_error_rate", at.per_error_rate);
  at.positioning_cm = get_or<double>(j, "positioning_cm", at.positioning_cm);
  at.sync_accuracy_us =
      get_or<std::int64_t>(j, "sync_accuracy_us", at.sync_accuracy_us);
  if (j.contains("power")) {
    const json& p = j.at("power");
    reject_unknown_keys(p, {"p_idle_w", "p_max_w", "p_sleep_w"},
                        "at " + id + " power");
    at.power.p_idle_w = get_required<double>(p, "p_idle_w", "at " + id);
    at.power.p_max_w = get_required<double>(p, "p_max_w", "at " + id);
    at.power.p_sleep_w = get_required<double>(p, "p_sleep_w", "at " + id);
  }
  auto zones = get_required<std::vector<std::string>>(j, "coverage", "at " + id);
  require(!zones.empty(), Errc::validation_error,
          "at " + id + ": coverage must list at least one zone");
  at.coverage = std::set<std::string>(zones.begin(), zones.end());
  at.validate();
  return at;
}

ComputeNode parse_node(const json& j) {
  reject_unknown_keys(j, {"id", "tier", "cpu_units", "mem_mb", "power"},
                      "node");
  ComputeNode n;
  n.id = get_required<std::string>(j, "id", "node");
  std::string tier_s = get_required<std::string>(j, "tier", "node " + n.id);
  auto tier = node_tier_from_name(tier_s);
  require(tier.has_value(), Errc::validation_error,
          "node " + n.id + ": unknown tier \"" + tier_s + "\"");
  n.tier = *tier;
  n.cpu_units = get_required<std::int64_t>(j, "cpu_units", "node " + n.id);
  n.mem_mb = get_required<std::int64_t>(j, "mem_mb", "node " + n.id);
  n.power = n.tier == NodeTier::edge ? PowerModel{150.0, 400.0, 20.0}
                                     : PowerModel{800.0, 2000.0, 100.0};
  if (j.contains("power")) {
    const json& p = j.at("power");
    reject_unknown_keys(p, {"p_idle_w", "p_max_w", "p_sleep_w"},
                        "node " + n.id + " power");
    n.power.p_idle_w = get_required<double>(p, "p_idle_w", "node " + n.id);
    n.power.p_max_w = get_required<double>(p, "p_max_w", "node " + n.id);
    n.power.p_sleep_w = get_required<double>(p, "p_sleep_w", "node " + n.id);
  }
  n.validate();
  return n;
}

Policy parse_policy(const json& j) {
  reject_unknown_keys(
      j, {"id", "issuer", "priority", "action", "kinds", "zones", "domains"},
      "policy");
  Policy p;
  p.id = get_required<std::string>(j, "id", "policy");
  std::string issuer_s = get_required<std::string>(j, "issuer", "policy " + p.id);
  auto issuer = policy_issuer_from_name(issuer_s);
  require(issuer.has_value(), Errc::validation_error,
          "policy " + p.id + ": unknown issuer \"" + issuer_s + "\"");
  p.issuer = *issuer;
  p.priority = get_required<int>(j, "priority", "policy " + p.id);
  std::string action = get_required<std::string>(j, "action", "policy " + p.id);
  require(action == "allow" || action == "deny", Errc::validation_error,
          "policy " + p.id + ": action must be allow or deny");
  p.action = action == "allow" ? PolicyAction::allow : PolicyAction::deny;
  for (const std::string& k :
       get_or<std::vector<std::string>>(j, "kinds", {})) {
    auto kind = use_case_from_name(k);
    require(kind.has_value(), Errc::validation_error,
            "policy " + p.id + ": unknown kind \"" + k + "\"");
    p.kinds.push_back(*kind);
  }
  p.zones = get_or<std::vector<std::string>>(j, "zones", {});
  p.domains = get_or<std::vector<std::string>>(j, "domains", {});
  return p;
}

KpiOverride parse_override(const json& j, const std::string& where) {
  reject_unknown_keys(j,
                      {"latency_bound_us", "latency_percentile",
                       "jitter_bound_us", "throughput_dl_bps",
                       "throughput_ul_bps", "reliability_min",
                       "positioning_cm", "sync_bound_us"},
                      where + " kpi_override");
  KpiOverride o;
  if (j.contains("latency_bound_us"))
    o.latency_bound_us = j.at("latency_bound_us").get<std::int64_t>();
  if (j.contains("latency_percentile"))
    o.latency_percentile = j.at("latency_percentile").get<double>();
  if (j.contains("jitter_bound_us"))
    o.jitter_bound_us = j.at("jitter_bound_us").get<std::int64_t>();
  if (j.contains("throughput_dl_bps"))
    o.throughput_dl_bps = j.at("throughput_dl_bps").get<std::int64_t>();
  if (j.contains("throughput_ul_bps"))
    o.throughput_ul_bps = j.at("throughput_ul_bps").get<std::int64_t>();
  if (j.contains("reliability_min"))
    o.reliability_min = j.at("reliability_min").get<double>();
  if (j.contains("positioning_cm"))
    o.positioning_cm = j.at("positioning_cm").get<double>();
  if (j.contains("sync_bound_us"))
    o.sync_bound_us = j.at("sync_bound_us").get<std::int64_t>();
  return o;
}

UseCaseSpec parse_workload(const json& j) {
  reject_unknown_keys(j,
                      {"name", "kind", "user_count", "area_m2", "duration_s",
                       "start_s", "arrival", "zone", "interaction_class",
                       "risk", "kpi_override"},
                      "workload");
  UseCaseSpec w;
  w.name = get_required<std::string>(j, "name", "workload");
  std::string kind_s = get_required<std::string>(j, "kind", "workload " + w.name);
  auto kind = use_case_from_name(kind_s);
  require(kind.has_value(), Errc::validation_error,
          "workload " + w.name + ": unknown kind \"" + kind_s + "\"");
  w.kind = *kind;
  w.user_count = get_required<std::int64_t>(j, "user_count", "workload " + w.name);
  w.area_m2 = get_required<double>(j, "area_m2", "workload " + w.name);
  w.duration_s = get_required<double>(j, "duration_s", "workload " + w.name);
  w.start_s = get_or<double>(j, "start_s", 0.0);
  w.zone = get_required<std::string>(j, "zone", "workload " + w.name);

  if (j.contains("arrival")) {
    const json& a = j.at("arrival");
    if (a.is_string()) {
      require(a.get<std::string>() == "all_at_start", Errc::validation_error,
              "workload " + w.name + ": arrival string must be all_at_start");
      w.arrival.kind = ArrivalKind::all_at_start;
    } else {
      reject_unknown_keys(a, {"poisson"}, "workload " + w.name + " arrival");
      const json& po = a.at("poisson");
      reject_unknown_keys(po, {"rate_per_s"},
                          "workload " + w.name + " arrival poisson");
      w.arrival.kind = ArrivalKind::poisson;
      w.arrival.rate_per_s =
          get_required<double>(po, "rate_per_s", "workload " + w.name);
    }
  }
  if (j.contains("interaction_class")) {
    std::string cls = j.at("interaction_class").get<std::string>();
    auto parsed = interaction_from_name(cls);
    require(parsed.has_value(), Errc::validation_error,
            "workload " + w.name + ": unknown interaction_class \"" + cls +
                "\"");
    w.interaction_class = parsed;
  }
  if (j.contains("risk")) {
    std::string risk_s = j.at("risk").get<std::string>();
    auto risk = risk_from_name(risk_s);
    require(risk.has_value(), Errc::validation_error,
            "workload " + w.name + ": unknown risk \"" + risk_s + "\"");
    w.risk = *risk;
  }
  if (j.contains("kpi_override")) {
    w.kpi_override = parse_override(j.at("kpi_override"), "workload " + w.name);
  }
  w.validate();
  return w;
}

json at_to_json(const AccessTech& at) {
  json j;
  j["id"] = at.id;
  j["kind"] = std::string(at_kind_name(at.kind));
  j["capacity_bps"] = at.capacity_bps;
  j["base_latency_us"] = at.base_latency_us;
  j["jitter_span_us"] = at.jitter_span_us;
  j["per_error_rate"] = at.per_error_rate;
  j["coverage"] = std::vector<std::string>(at.coverage.begin(),
                                           at.coverage.end());
  j["power"] = {{"p_idle_w", at.power.p_idle_w},
                {"p_max_w", at.power.p_max_w},
                {"p_sleep_w", at.power.p_sleep_w}};
  j["positioning_cm"] = at.positioning_cm;
  j["sync_accuracy_us"] = at.sync_accuracy_us;
  return j;
}

json node_to_json(const ComputeNode& n) {
  json j;
  j["id"] = n.id;
  j["tier"] = std::string(node_tier_name(n.tier));
  j["cpu_units"] = n.cpu_units;
  j["mem_mb"] = n.mem_mb;
  j["power"] = {{"p_idle_w", n.power.p_idle_w},
                {"p_max_w", n.power.p_max_w},
                {"p_sleep_w", n.power.p_sleep_w}};
  return j;
}

json policy_to_json(const Policy& p) {
  json j;
  j["id"] = p.id;
  j["issuer"] = std::string(policy_issuer_name(p.issuer));
  j["priority"] = p.priority;
  j["action"] = p.action == PolicyAction::allow ? "allow" : "deny";
  std::vector<std::string> kinds;
  for (UseCaseKind k : p.kinds) kinds.emplace_back(use_case_name(k));
  j["kinds"] = kinds;
  j["zones"] = p.zones;
  j["domains"] = p.domains;
  return j;
}

json workload_to_json(const UseCaseSpec& w) {
  json j;
  j["name"] = w.name;
  j["kind"] = std::string(use_case_name(w.kind));
  j["user_count"] = w.user_count;
  j["area_m2"] = w.area_m2;
  j["duration_s"] = w.duration_s;
  j["start_s"] = w.start_s;
  if (w.arrival.kind == ArrivalKind::all_at_start) {
    j["arrival"] = "all_at_start";
  } else {
    j["arrival"] = {{"poisson", {{"rate_per_s", w.arrival.rate_per_s}}}};
  }
  j["zone"] = w.zone;
  if (w.interaction_class) {
    j["interaction_class"] = std::string(interaction_name(*w.interaction_class));
  }
  j["risk"] = std::string(risk_name(w.risk));
  if (w.kpi_override && w.kpi_override->any()) {
    json o;
    const KpiOverride& ov = *w.kpi_override;
    if (ov.latency_bound_us) o["latency_bound_us"] = *ov.latency_bound_us;
    if (ov.latency_percentile) o["latency_percentile"] = *ov.latency_percentile;
    if (ov.jitter_bound_us) o["jitter_bound_us"] = *ov.jitter_bound_us;
    if (ov.throughput_dl_bps) o["throughput_dl_bps"] = *ov.throughput_dl_bps;
    if (ov.throughput_ul_bps) o["throughput_ul_bps"] = *ov.throughput_ul_bps;
    if (ov.reliability_min) o["reliability_min"] = *ov.reliability_min;
    if (ov.positioning_cm) o["positioning_cm"] = *ov.positioning_cm;
    if (ov.sync_bound_us) o["sync_bound_us"] = *ov.sync_bound_us;
    j["kpi_override"] = o;
  }
  return j;
}

}  // namespace

void SimParams::validate() const {
  score_weights.validate();
  require(hysteresis >= 0.0, Errc::validation_error,
          "hysteresis must be non-negative");
  require(min_dwell_us >= 0, Errc::validation_error,
          "min_dwell_us must be non-negative");
  require(telemetry_capacity > 0, Errc::validation_error,
          "telemetry_capacity must be positive");
  require(lambda_w_per_us >= 0.0, Errc::validation_error,
          "lambda_w_per_us must be non-negative");
  require(internode_latency_us >= 0, Errc::validation_error,
          "internode_latency_us must be non-negative");
  require(window_span_us > 0 && flow_sample_period_us > 0 &&
              collect_period_us > 0 && handover_period_us > 0 &&
              energy_period_us > 0 && scale_period_us > 0 &&
              sleep_idle_threshold_us >= 0,
          Errc::validation_error, "engine periods must be positive");
  require(ewma_alpha > 0.0 && ewma_alpha <= 1.0, Errc::validation_error,
          "ewma_alpha must lie in (0,1]");
}

void Scenario::validate() const {
  require(duration_s > 0.0, Errc::validation_error,
          "duration_s must be positive");
  require(!domains.empty(), Errc::validation_error,
          "scenario needs at least one domain");
  params.validate();

  std::set<std::string> domain_ids, at_ids, node_ids, workload_names,
      policy_ids;
  std::set<int> priorities;
  for (const DomainSpec& d : domains) {
    require(!d.id.empty(), Errc::validation_error, "domain id must be set");
    require(domain_ids.insert(d.id).second, Errc::validation_error,
            "duplicate domain id " + d.id);
    require(d.unit_cost_per_gbps >= 0.0, Errc::validation_error,
            "domain " + d.id + ": unit_cost_per_gbps must be non-negative");
    require(!d.ats.empty(), Errc::validation_error,
            "domain " + d.id + " needs at least one at");
    for (const AccessTech& at : d.ats) {
      at.validate();
      require(at_ids.insert(at.id).second, Errc::validation_error,
              "duplicate at id " + at.id);
    }
    for (const ComputeNode& n : d.nodes) {
      n.validate();
      require(node_ids.insert(n.id).second, Errc::validation_error,
              "duplicate node id " + n.id);
    }
  }
  for (const Policy& p : policies) {
    require(policy_ids.insert(p.id).second, Errc::validation_error,
            "duplicate policy id " + p.id);
    require(priorities.insert(p.priority).second, Errc::validation_error,
            "duplicate policy priority " + std::to_string(p.priority));
  }
  for (const UseCaseSpec& w : workloads) {
    w.validate();
    require(workload_names.insert(w.name).second, Errc::validation_error,
            "duplicate workload name " + w.name);
  }
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse_error, e.what());
  }
  require(root.is_object(), Errc::parse_error,
          "scenario document must be a JSON object");
  reject_unknown_keys(root,
                      {"seed", "duration_s", "toggles", "params", "domains",
                       "policies", "workloads"},
                      "scenario");

  Scenario sc;
  sc.seed = get_or<std::uint64_t>(root, "seed", 0);
  sc.duration_s = get_required<double>(root, "duration_s", "scenario");

  if (root.contains("toggles")) {
    const json& t = root.at("toggles");
    reject_unknown_keys(t, {"sleep_policy", "explain"}, "toggles");
    sc.toggles.sleep_policy = get_or<bool>(t, "sleep_policy", false);
    sc.toggles.explain = get_or<bool>(t, "explain", false);
  }

  if (root.contains("params")) {
    const json& p = root.at("params");
    reject_unknown_keys(p,
                        {"score_weights", "hysteresis", "min_dwell_us",
                         "telemetry_capacity", "lambda_w_per_us",
                         "internode_latency_us", "window_span_us",
                         "flow_sample_period_us", "collect_period_us",
                         "handover_period_us", "energy_period_us",
                         "scale_period_us", "sleep_idle_threshold_us",
                         "ewma_alpha"},
                        "params");
    if (p.contains("score_weights")) {
      const json& w = p.at("score_weights");
      reject_unknown_keys(w, {"latency", "capacity", "energy"},
                          "score_weights");
      sc.params.score_weights.w_latency =
          get_required<double>(w, "latency", "score_weights");
      sc.params.score_weights.w_capacity =
          get_required<double>(w, "capacity", "score_weights");
      sc.params.score_weights.w_energy =
          get_required<double>(w, "energy", "score_weights");
    }
    SimParams& sp = sc.params;
    sp.hysteresis = get_or<double>(p, "hysteresis", sp.hysteresis);
    sp.min_dwell_us = get_or<std::int64_t>(p, "min_dwell_us", sp.min_dwell_us);
    sp.telemetry_capacity =
        get_or<std::int64_t>(p, "telemetry_capacity", sp.telemetry_capacity);
    sp.lambda_w_per_us =
        get_or<double>(p, "lambda_w_per_us", sp.lambda_w_per_us);
    sp.internode_latency_us = get_or<std::int64_t>(p, "internode_latency_us",
                                                   sp.internode_latency_us);
    sp.window_span_us =
        get_or<std::int64_t>(p, "window_span_us", sp.window_span_us);
    sp.flow_sample_period_us = get_or<std::int64_t>(p, "flow_sample_period_us",
                                                    sp.flow_sample_period_us);
    sp.collect_period_us =
        get_or<std::int64_t>(p, "collect_period_us", sp.collect_period_us);
    sp.handover_period_us =
        get_or<std::int64_t>(p, "handover_period_us", sp.handover_period_us);
    sp.energy_period_us =
        get_or<std::int64_t>(p, "energy_period_us", sp.energy_period_us);
    sp.scale_period_us =
        get_or<std::int64_t>(p, "scale_period_us", sp.scale_period_us);
    sp.sleep_idle_threshold_us = get_or<std::int64_t>(
        p, "sleep_idle_threshold_us", sp.sleep_idle_threshold_us);
    sp.ewma_alpha = get_or<double>(p, "ewma_alpha", sp.ewma_alpha);
  }

  require(root.contains("domains"), Errc::validation_error,
          "scenario: missing required field \"domains\"");
  for (const json& d : root.at("domains")) {
    reject_unknown_keys(d, {"id", "unit_cost_per_gbps", "ats", "nodes"},
                        "domain");
    DomainSpec spec;
    spec.id = get_required<std::string>(d, "id", "domain");
    spec.unit_cost_per_gbps = get_or<double>(d, "unit_cost_per_gbps", 1.0);
    require(d.contains("ats"), Errc::validation_error,
            "domain " + spec.id + ": missing required field \"ats\"");
    for (const json& a : d.at("ats")) spec.ats.push_back(parse_at(a));
    if (d.contains("nodes")) {
      for (const json& n : d.at("nodes")) spec.nodes.push_back(parse_node(n));
    }
    sc.domains.push_back(std::move(spec));
  }

  if (root.contains("policies")) {
    for (const json& p : root.at("policies")) {
      sc.policies.push_back(parse_policy(p));
    }
  }
  if (root.contains("workloads")) {
    for (const json& w : root.at("workloads")) {
      sc.workloads.push_back(parse_workload(w));
    }
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::parse_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json root;
  root["seed"] = sc.seed;
  root["duration_s"] = sc.duration_s;
  root["toggles"] = {{"sleep_policy", sc.toggles.sleep_policy},
                     {"explain", sc.toggles.explain}};
  const SimParams& sp = sc.params;
  root["params"] = {
      {"score_weights",
       {{"latency", sp.score_weights.w_latency},
        {"capacity", sp.score_weights.w_capacity},
        {"energy", sp.score_weights.w_energy}}},
      {"hysteresis", sp.hysteresis},
      {"min_dwell_us", sp.min_dwell_us},
      {"telemetry_capacity", sp.telemetry_capacity},
      {"lambda_w_per_us", sp.lambda_w_per_us},
      {"internode_latency_us", sp.internode_latency_us},
      {"window_span_us", sp.window_span_us},
      {"flow_sample_period_us", sp.flow_sample_period_us},
      {"collect_period_us", sp.collect_period_us},
      {"handover_period_us", sp.handover_period_us},
      {"energy_period_us", sp.energy_period_us},
      {"scale_period_us", sp.scale_period_us},
      {"sleep_idle_threshold_us", sp.sleep_idle_threshold_us},
      {"ewma_alpha", sp.ewma_alpha}};

  json domains = json::array();
  for (const DomainSpec& d : sc.domains) {
    json dj;
    dj["id"] = d.id;
    dj["unit_cost_per_gbps"] = d.unit_cost_per_gbps;
    json ats = json::array();
    for (const AccessTech& at : d.ats) ats.push_back(at_to_json(at));
    dj["ats"] = ats;
    json nodes = json::array();
    for (const ComputeNode& n : d.nodes) nodes.push_back(node_to_json(n));
    dj["nodes"] = nodes;
    domains.push_back(dj);
  }
  root["domains"] = domains;

  json policies = json::array();
  for (const Policy& p : sc.policies) policies.push_back(policy_to_json(p));
  root["policies"] = policies;

  json workloads = json::array();
  for (const UseCaseSpec& w : sc.workloads) {
    workloads.push_back(workload_to_json(w));
  }
  root["workloads"] = workloads;

  return root.dump(2) + "\n";
}

}  // namespace orchsim
