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

#include "orchsim/runner.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <set>

#include "json.hpp"

#include "orchsim/access_net.hpp"
#include "orchsim/cognition.hpp"
#include "orchsim/energy.hpp"
#include "orchsim/inter_orch.hpp"
#include "orchsim/intra_orch.hpp"
#include "orchsim/kernel.hpp"
#include "orchsim/matric.hpp"
#include "orchsim/monitoring.hpp"
#include "orchsim/workloads.hpp"

namespace orchsim {

namespace {

using nlohmann::json;

struct DomainRt {
  std::string id;
  AccessNet net;
  std::unique_ptr<Matric> matric;
  std::unique_ptr<IntraOrch> orch;
  std::map<std::string, SimTime> at_last_busy;
  std::set<std::string> registered_ues;

  explicit DomainRt(const std::string& domain_id) : id(domain_id), net(domain_id) {}
};

struct ChainRt {
  std::string domain;
  ServiceChain nominal;  // demand baseline, never rescaled
  ServiceChain current;  // live requirements after scale actions
  PlacementPlan plan;
  std::vector<ResourceUsage> history;
  bool placed = false;
  std::string error;
};

struct KpiAgg {
  bool seen = false;
  double worst = 0.0;
  bool pass = true;

  void observe_upper(double measured, bool ok) {  // latency/jitter style
    worst = seen ? std::max(worst, measured) : measured;
    seen = true;
    pass = pass && ok;
  }
  void observe_lower(double measured, bool ok) {  // throughput/reliability
    worst = seen ? std::min(worst, measured) : measured;
    seen = true;
    pass = pass && ok;
  }
};

struct FlowRt {
  std::string key;  // "<flow id>@<domain>"
  FlowTemplate tmpl;
  std::string sla_id;
  std::string domain;
  bool counts_delivery = false;  // serving (last) domain leg
  KpiRequirementSet leg_kpi;
  Flow flow;
  std::deque<LinkSample> buffer;
  SimTime arrival_abs = 0;
  SimTime release_abs = 0;
  SimTime admitted_at = -1;
  SimTime released_at = -1;
  bool admission_failed = false;
  std::size_t handovers = 0;
  std::size_t share_increases = 0;
  std::int64_t delivery_carry = 0;  // sub-bit remainder of bps*us/1e6
  std::int64_t delivered_total = 0;
  KpiAgg latency, jitter, throughput, reliability;
};

struct SlaRt {
  E2eSla e2e;
  TaskIntent intent;
  RiskLevel risk = RiskLevel::low;
  SecurityControlPlan controls;
  std::vector<DomainSla> decomposed;
  std::vector<std::string> flow_keys;
  std::size_t flows_done = 0;
  SimTime first_violation_us = -1;
  std::string setup_error;
};

struct WorkGroup {
  SimTime start_us = 0;
  RiskLevel risk = RiskLevel::low;
  std::optional<KpiOverride> kpi_override;
  std::vector<TaskIntent> intents;
  std::vector<FlowTemplate> flows;
  std::string sla_id;
};

class Engine {
 public:
  explicit Engine(const Scenario& sc)
      : sc_(sc), kernel_(sc.seed), integrator_(ledger_) {}

  RunReport execute();

 private:
  // --- setup ---------------------------------------------------------------
  void build_domains();
  void build_groups();
  void schedule_periodics();

  // --- event handlers ------------------------------------------------------
  void on_sla_setup(std::size_t group_index);
  void on_flow_arrival(const std::string& key);
  void on_flow_sample(const std::string& key);
  void on_flow_kpi_eval(const std::string& key);
  void on_flow_handover_eval(const std::string& key);
  void on_flow_release(const std::string& key);
  void on_collect(const std::string& domain);
  void on_energy_tick();
  void on_sleep_patrol();
  void on_scale_check(const std::string& domain);
  void scale_domain(const std::string& domain);

  // --- helpers -------------------------------------------------------------
  DomainRt& domain(const std::string& id);
  void update_at_power(DomainRt& d, const std::string& at_id);
  void update_node_power(DomainRt& d, const std::string& node_id);
  void record_violation(SlaRt& sla, SimTime t);
  void apply_qos_actions(FlowRt& rt, const std::vector<QosAction>& actions);
  void try_handover(FlowRt& rt, SimTime t);
  void note_explanation(const Explanation& ex);
  std::vector<CapabilityRecord> snapshot_capabilities() const;

  // --- output --------------------------------------------------------------
  RunReport build_report();

  const Scenario& sc_;
  SimKernel kernel_;
  Broker broker_;
  EnergyLedger ledger_;
  PowerIntegrator integrator_;

  std::map<std::string, std::unique_ptr<DomainRt>> domains_;
  std::vector<std::string> domain_order_;
  std::vector<WorkGroup> groups_;
  std::vector<SlaRt> slas_;
  std::map<std::string, FlowRt> flows_;
  std::vector<std::string> flow_order_;
  std::vector<ChainRt> chains_;
  std::vector<std::string> warnings_;
  std::vector<json> explanations_;

  std::size_t admission_failures_ = 0;
  std::size_t window_violations_ = 0;
  std::size_t handovers_ = 0;
  std::size_t escalations_ = 0;
  std::size_t share_increases_ = 0;
  std::size_t scale_actions_ = 0;
  std::size_t replacements_ = 0;
  SimTime first_violation_us_ = -1;
};

DomainRt& Engine::domain(const std::string& id) {
  auto it = domains_.find(id);
  invariant(it != domains_.end(), "unknown domain " + id);
  return *it->second;
}

void Engine::build_domains() {
  for (const DomainSpec& spec : sc_.domains) {
    auto d = std::make_unique<DomainRt>(spec.id);
    for (const AccessTech& at : spec.ats) d->net.add_at(at);
    d->matric = std::make_unique<Matric>(
        spec.id, d->net, broker_, std::size_t(sc_.params.telemetry_capacity));
    d->orch = std::make_unique<IntraOrch>(
        spec.id, d->net, spec.unit_cost_per_gbps, sc_.params.lambda_w_per_us,
        sc_.params.internode_latency_us);
    for (const ComputeNode& n : spec.nodes) d->orch->add_node(n);

    for (const AccessTech& at : spec.ats) {
      d->matric->register_endpoint(
          EndpointRecord{at.id, EndpointKind::at, 0, true});
      d->at_last_busy[at.id] = 0;
      integrator_.set_power(at.id, 0,
                            AccessNet::at_power(d->net.at(at.id), 0.0));
    }
    for (const ComputeNode& n : spec.nodes) {
      integrator_.set_power(n.id, 0, n.power.p_idle_w);
    }
    domain_order_.push_back(spec.id);
    domains_.emplace(spec.id, std::move(d));
  }
}

void Engine::build_groups() {
  // Requests of the same nature (kind, zone, interaction class) merge when
  // they also share start time, risk and KPI override; the merged SLA then
  // covers every member workload's flows.
  auto override_key = [](const UseCaseSpec& w) {
    if (!w.kpi_override || !w.kpi_override->any()) return std::string("-");
    KpiRequirementSet probe;
    probe.latency_bound_us = 1;
    probe.throughput_dl_bps = 1;
    probe.throughput_ul_bps = 1;
    w.kpi_override->apply(probe);
    return std::to_string(probe.latency_bound_us) + "/" +
           fmt_double(probe.latency_percentile) + "/" +
           (probe.jitter_bound_us ? std::to_string(*probe.jitter_bound_us)
                                  : std::string("-")) +
           "/" + std::to_string(probe.throughput_dl_bps) + "/" +
           std::to_string(probe.throughput_ul_bps) + "/" +
           fmt_double(probe.reliability_min) + "/" +
           (probe.positioning_cm ? fmt_double(*probe.positioning_cm)
                                 : std::string("-")) +
           "/" +
           (probe.sync_bound_us ? std::to_string(*probe.sync_bound_us)
                                : std::string("-"));
  };

  std::map<std::string, std::size_t> index_of;
  for (const UseCaseSpec& w : sc_.workloads) {
    RngStream& rng = kernel_.rng("workload." + w.name);
    GeneratedWorkload gen = generate_workload(w, rng);
    for (const std::string& warn : gen.warnings) warnings_.push_back(warn);

    SimTime start_us = SimTime(w.start_s * double(kUsPerSec));
    std::string key = std::string(use_case_name(w.kind)) + "|" + w.zone + "|" +
                      (w.interaction_class
                           ? std::string(interaction_name(*w.interaction_class))
                           : std::string("-")) +
                      "|" + std::to_string(start_us) + "|" +
                      std::string(risk_name(w.risk)) + "|" + override_key(w);
    auto it = index_of.find(key);
    if (it == index_of.end()) {
      WorkGroup g;
      g.start_us = start_us;
      g.risk = w.risk;
      g.kpi_override = w.kpi_override;
      index_of.emplace(key, groups_.size());
      groups_.push_back(std::move(g));
      it = index_of.find(key);
    }
    WorkGroup& g = groups_[it->second];
    g.intents.push_back(gen.intent);
    for (FlowTemplate& f : gen.flows) g.flows.push_back(std::move(f));
  }
  std::stable_sort(groups_.begin(), groups_.end(),
                   [](const WorkGroup& a, const WorkGroup& b) {
                     return a.start_us < b.start_us;
                   });
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    groups_[i].sla_id = "sla" + std::to_string(i);
  }
}

std::vector<CapabilityRecord> Engine::snapshot_capabilities() const {
  std::vector<CapabilityRecord> caps;
  for (const std::string& id : domain_order_) {
    caps.push_back(domains_.at(id)->orch->advertise_capabilities());
  }
  return caps;
}

void Engine::schedule_periodics() {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    kernel_.schedule(groups_[i].start_us, groups_[i].sla_id, "sla_setup",
                     [this, i](SimKernel&) { on_sla_setup(i); });
  }
  for (const std::string& id : domain_order_) {
    kernel_.schedule(0, "matric." + id, "collect",
                     [this, id](SimKernel&) { on_collect(id); });
    kernel_.schedule(sc_.params.scale_period_us, "orch." + id, "scale_check",
                     [this, id](SimKernel&) { on_scale_check(id); });
  }
  kernel_.schedule(sc_.params.energy_period_us, "energy", "account",
                   [this](SimKernel&) { on_energy_tick(); });
  if (sc_.toggles.sleep_policy) {
    SimTime period = std::max<SimTime>(sc_.params.sleep_idle_threshold_us,
                                       sc_.params.collect_period_us);
    kernel_.schedule(period, "energy", "sleep_patrol",
                     [this](SimKernel&) { on_sleep_patrol(); });
  }
}

void Engine::update_at_power(DomainRt& d, const std::string& at_id) {
  const AccessTech& at = d.net.at(at_id);
  integrator_.set_power(at_id, kernel_.now(),
                        AccessNet::at_power(at, at.load_fraction()));
}

void Engine::update_node_power(DomainRt& d, const std::string& node_id) {
  const ComputeNode& n = d.orch->node(node_id);
  double watts = n.power.p_idle_w +
                 (n.power.p_max_w - n.power.p_idle_w) * n.load_fraction();
  integrator_.set_power(node_id, kernel_.now(), watts);
}

void Engine::record_violation(SlaRt& sla, SimTime t) {
  if (sla.first_violation_us < 0) sla.first_violation_us = t;
  if (first_violation_us_ < 0) first_violation_us_ = t;
  sla.e2e.state = SlaState::violated;
  broker_.publish({t, "orch.sla." + sla.e2e.id, 1.0, MetricUnit::boolean});
}

void Engine::note_explanation(const Explanation& ex) {
  if (!sc_.toggles.explain) return;
  json j;
  j["decision"] = ex.decision;
  j["outcome"] = ex.outcome;
  json ranked = json::array();
  for (const auto& [name, phi] : ex.ranked) {
    ranked.push_back({{"feature", name}, {"phi", phi}});
  }
  j["attribution"] = ranked;
  explanations_.push_back(std::move(j));
}

void Engine::on_sla_setup(std::size_t group_index) {
  WorkGroup& g = groups_[group_index];
  SlaRt sla;
  sla.risk = g.risk;
  sla.controls = select_controls(g.risk);
  sla.e2e.id = g.sla_id;

  std::vector<TaskIntent> composed = compose_requests(g.intents);
  invariant(composed.size() == 1, "group must compose to a single request");
  sla.intent = composed.front();
  // SLA-level KPI is the per-user preset (plus override); per-stream bounds
  // (virtual production) live on the flow templates.
  sla.e2e.kpi = translate_intent(sla.intent);
  if (g.kpi_override) g.kpi_override->apply(sla.e2e.kpi);

  broker_.advertise(
      {"orch.sla." + sla.e2e.id, "inter-orch", MetricUnit::boolean});

  std::vector<CapabilityRecord> caps = snapshot_capabilities();
  std::vector<std::string> path;
  try {
    path = select_domains(sla.intent, sla.e2e.kpi, caps, sc_.policies);
  } catch (const SimError& e) {
    sla.setup_error = e.what();
    warnings_.push_back("sla " + sla.e2e.id + ": " + e.what());
    record_violation(sla, kernel_.now());
    admission_failures_ += g.flows.size();
    for (const FlowTemplate& tmpl : g.flows) {
      FlowRt rt;
      rt.key = tmpl.id + "@-";
      rt.tmpl = tmpl;
      rt.sla_id = sla.e2e.id;
      rt.domain = "-";
      rt.leg_kpi = tmpl.kpi;
      rt.admission_failed = true;
      rt.throughput.observe_lower(0.0, false);
      rt.reliability.observe_lower(0.0, false);
      sla.flow_keys.push_back(rt.key);
      flow_order_.push_back(rt.key);
      flows_.emplace(rt.key, std::move(rt));
    }
    slas_.push_back(std::move(sla));
    return;
  }
  sla.e2e.domain_path = path;
  sla.e2e.state = SlaState::active;

  if (sc_.toggles.explain) {
    std::vector<FeatureTerm> terms;
    double gbps = double(sla.e2e.kpi.peak_throughput_bps()) *
                  double(sla.intent.user_count) / 1e9;
    for (const std::string& d : path) {
      for (const CapabilityRecord& c : caps) {
        if (c.domain == d) {
          terms.push_back({d, -c.unit_cost_per_gbps * gbps});
        }
      }
    }
    note_explanation(explain_decision("select_domains:" + sla.e2e.id, terms));
  }

  std::vector<CapabilityRecord> path_caps;
  for (const std::string& d : path) {
    for (const CapabilityRecord& c : caps) {
      if (c.domain == d) path_caps.push_back(c);
    }
  }
  sla.decomposed = decompose_sla(sla.e2e, path_caps);

  // One service chain per request, hosted by the serving domain.
  {
    DomainRt& serving = domain(path.back());
    ChainRt chain;
    chain.domain = serving.id;
    chain.nominal.id = "svc." + sla.e2e.id;
    std::int64_t fn_count =
        std::clamp<std::int64_t>((sla.intent.user_count + 9) / 10, 1, 4);
    std::int64_t aggregate = sla.e2e.kpi.peak_throughput_bps() *
                             sla.intent.user_count;
    for (std::int64_t i = 0; i < fn_count; ++i) {
      chain.nominal.functions.push_back(ServiceFunction{
          2, 2048, std::max<std::int64_t>(aggregate / fn_count, 1)});
    }
    chain.current = chain.nominal;
    if (!serving.orch->nodes().empty()) {
      try {
        chain.plan = serving.orch->place_service(chain.current);
        chain.placed = true;
        for (const std::string& node_id : chain.plan.assignments) {
          update_node_power(serving, node_id);
        }
      } catch (const SimError& e) {
        chain.error = e.what();
        warnings_.push_back("sla " + sla.e2e.id + ": " + e.what());
      }
      chains_.push_back(std::move(chain));
    }
  }

  // Per-flow legs, one per path domain. Only the serving domain delivers
  // to the user zone; a transit leg enters at its first advertised prefix.
  for (const FlowTemplate& tmpl : g.flows) {
    E2eSla flow_sla;
    flow_sla.id = tmpl.id;
    flow_sla.kpi = tmpl.kpi;
    flow_sla.domain_path = path;
    std::vector<DomainSla> flow_budgets = decompose_sla(flow_sla, path_caps);

    for (std::size_t di = 0; di < path.size(); ++di) {
      const std::string& dom = path[di];
      FlowRt rt;
      rt.key = tmpl.id + "@" + dom;
      rt.tmpl = tmpl;
      rt.sla_id = sla.e2e.id;
      rt.domain = dom;
      rt.counts_delivery = di + 1 == path.size();
      rt.leg_kpi = flow_budgets[di].kpi;
      rt.flow.id = tmpl.id;
      rt.flow.ue = tmpl.ue;
      rt.flow.zone = tmpl.zone;
      rt.flow.demand_bps = tmpl.demand_bps;
      rt.flow.kpi = rt.leg_kpi;
      if (!rt.counts_delivery) {
        const CapabilityRecord& cap = path_caps[di];
        if (!cap.prefixes.empty() &&
            std::find(cap.prefixes.begin(), cap.prefixes.end(), tmpl.zone) ==
                cap.prefixes.end()) {
          rt.flow.zone = cap.prefixes.front();
        }
      }
      rt.arrival_abs = g.start_us + tmpl.arrival_us;
      rt.release_abs = g.start_us + tmpl.release_us;
      sla.flow_keys.push_back(rt.key);
      flow_order_.push_back(rt.key);
      std::string key = rt.key;
      flows_.emplace(key, std::move(rt));

      kernel_.schedule(flows_.at(key).arrival_abs, key, "arrival",
                       [this, key](SimKernel&) { on_flow_arrival(key); });
      kernel_.schedule(flows_.at(key).release_abs, key, "release",
                       [this, key](SimKernel&) { on_flow_release(key); });
    }
  }
  slas_.push_back(std::move(sla));
}

void Engine::on_flow_arrival(const std::string& key) {
  FlowRt& rt = flows_.at(key);
  DomainRt& d = domain(rt.domain);
  SlaRt* sla = nullptr;
  for (SlaRt& s : slas_) {
    if (s.e2e.id == rt.sla_id) sla = &s;
  }
  invariant(sla != nullptr, "flow without sla");

  if (d.registered_ues.insert(rt.flow.ue).second &&
      !d.matric->endpoint(rt.flow.ue)) {
    d.matric->register_endpoint(
        EndpointRecord{rt.flow.ue, EndpointKind::ue, kernel_.now(), true});
  }

  std::vector<std::string> candidates = d.matric->all_at_ids();
  AttachmentPlan plan;
  bool attached = false;
  try {
    plan = d.matric->select_at(rt.flow, candidates, sc_.params.score_weights);
    attached = true;
  } catch (const SimError&) {
    if (sc_.toggles.sleep_policy) {
      bool woke = false;
      for (const std::string& at_id : candidates) {
        const AccessTech& at = d.net.at(at_id);
        if (at.state == AtState::sleeping && at.covers(rt.flow.zone)) {
          d.net.set_sleep(at_id, false);
          update_at_power(d, at_id);
          woke = true;
        }
      }
      if (woke) {
        try {
          plan = d.matric->select_at(rt.flow, candidates,
                                     sc_.params.score_weights);
          attached = true;
        } catch (const SimError&) {
        }
      }
    }
  }

  if (!attached) {
    rt.admission_failed = true;
    rt.throughput.observe_lower(0.0, false);
    rt.reliability.observe_lower(0.0, false);
    ++admission_failures_;
    record_violation(*sla, kernel_.now());
    return;
  }

  d.matric->attach(rt.flow, plan, kernel_.now());
  rt.admitted_at = kernel_.now();
  for (const Attachment& leg : plan.legs) {
    update_at_power(d, leg.at_id);
    d.at_last_busy[leg.at_id] = kernel_.now();
  }

  if (sc_.toggles.explain) {
    const std::string& chosen = plan.legs.front().at_id;
    double mp = d.matric->max_pmax(candidates);
    std::vector<FeatureTerm> terms;
    for (const auto& [name, value] : d.matric->score_terms(
             d.net.at(chosen), rt.flow, sc_.params.score_weights, mp)) {
      terms.push_back({name, value});
    }
    note_explanation(explain_decision(
        "select_at:" + rt.key + "->" + chosen, terms,
        [](double s) { return std::clamp(s, 0.0, 1.0); }));
  }

  kernel_.schedule(kernel_.now() + sc_.params.flow_sample_period_us, rt.key,
                   "sample", [this, key](SimKernel&) { on_flow_sample(key); });
  kernel_.schedule(kernel_.now() + sc_.params.handover_period_us, rt.key,
                   "handover_eval",
                   [this, key](SimKernel&) { on_flow_handover_eval(key); });
}

void Engine::on_flow_sample(const std::string& key) {
  FlowRt& rt = flows_.at(key);
  if (!rt.flow.admitted() || rt.released_at >= 0) return;
  DomainRt& d = domain(rt.domain);
  RngStream& rng = kernel_.rng("link." + rt.domain + "." + rt.flow.id);

  SimTime now = kernel_.now();
  SimTime period = sc_.params.flow_sample_period_us;
  std::int64_t latency = 0;
  std::int64_t carried_bps = 0;
  bool lost = false;
  for (const Attachment& leg : rt.flow.attachments) {
    const AccessTech& at = d.net.at(leg.at_id);
    double load = std::min(at.load_fraction(), 0.999999);
    latency = std::max(latency, AccessNet::sample_latency(at, load, rng));
    bool leg_lost = AccessNet::sample_loss(at, rng);
    lost = lost || leg_lost;
    if (!leg_lost) carried_bps += leg.share_bps;
  }
  // Carry the sub-bit remainder so every full window accounts the exact
  // bps * span product.
  std::int64_t numer = carried_bps * period + rt.delivery_carry;
  std::int64_t delivered = numer / kUsPerSec;
  rt.delivery_carry = numer % kUsPerSec;

  LinkSample sample{now, rt.flow.id, latency, delivered, lost};
  rt.buffer.push_back(sample);
  while (!rt.buffer.empty() &&
         rt.buffer.front().t <= now - sc_.params.window_span_us) {
    rt.buffer.pop_front();
  }
  rt.delivered_total += delivered;
  if (rt.counts_delivery) ledger_.add_delivered_bits(delivered);

  if ((now - rt.admitted_at) % sc_.params.window_span_us == 0) {
    kernel_.schedule(now, rt.key, "kpi_eval",
                     [this, key](SimKernel&) { on_flow_kpi_eval(key); });
  }
  if (now + period <= rt.release_abs) {
    kernel_.schedule(now + period, rt.key, "sample",
                     [this, key](SimKernel&) { on_flow_sample(key); });
  }
}

void Engine::on_flow_kpi_eval(const std::string& key) {
  FlowRt& rt = flows_.at(key);
  if (!rt.flow.admitted() || rt.released_at >= 0) return;
  SlaRt* sla = nullptr;
  for (SlaRt& s : slas_) {
    if (s.e2e.id == rt.sla_id) sla = &s;
  }
  invariant(sla != nullptr, "flow without sla");

  KpiWindow window;
  window.flow = rt.flow.id;
  window.span_us = sc_.params.window_span_us;
  window.samples.assign(rt.buffer.begin(), rt.buffer.end());
  if (window.samples.empty()) return;

  KpiValues values = measure_window(window, rt.leg_kpi.latency_percentile);
  ComplianceReport report =
      evaluate_sla(rt.key, rt.leg_kpi, values, /*fail_missing=*/true);

  for (const ComplianceItem& item : report.items) {
    if (item.kpi.rfind("latency", 0) == 0) {
      rt.latency.observe_upper(item.measured, item.pass);
    } else if (item.kpi == "jitter") {
      rt.jitter.observe_upper(item.measured, item.pass);
    } else if (item.kpi == "throughput") {
      rt.throughput.observe_lower(item.measured, item.pass);
    } else if (item.kpi == "reliability") {
      rt.reliability.observe_lower(item.measured, item.pass);
    }
  }

  if (!report.compliant) {
    ++window_violations_;
    record_violation(*sla, kernel_.now());
    DomainRt& d = domain(rt.domain);
    std::vector<QosAction> actions =
        d.matric->enforce_qos(rt.flow, values, d.matric->all_at_ids());
    apply_qos_actions(rt, actions);
  }
}

void Engine::apply_qos_actions(FlowRt& rt,
                               const std::vector<QosAction>& actions) {
  DomainRt& d = domain(rt.domain);
  for (const QosAction& action : actions) {
    switch (action.type) {
      case QosActionType::increase_share: {
        Attachment& primary = rt.flow.attachments.front();
        std::int64_t new_share = primary.share_bps + action.delta_bps;
        d.net.release_flow(primary.at_id, rt.flow.id);
        d.net.admit_flow(primary.at_id, rt.flow, new_share);
        rt.flow.demand_bps += action.delta_bps;
        primary.share_bps = new_share;
        update_at_power(d, primary.at_id);
        d.at_last_busy[primary.at_id] = kernel_.now();
        ++share_increases_;
        ++rt.share_increases;
        break;
      }
      case QosActionType::handover_eval:
        try_handover(rt, kernel_.now());
        break;
      case QosActionType::escalate:
        // One-shot push to the intra-domain orchestrator; the periodic
        // scale chain keeps its own cadence.
        ++escalations_;
        kernel_.schedule(kernel_.now(), "orch." + rt.domain, "escalation",
                         [this, dom = rt.domain](SimKernel&) {
                           scale_domain(dom);
                         });
        break;
    }
  }
}

void Engine::try_handover(FlowRt& rt, SimTime t) {
  DomainRt& d = domain(rt.domain);
  MobilityConfig cfg{sc_.params.hysteresis, sc_.params.min_dwell_us};
  HandoverDecision decision = d.matric->evaluate_handover(
      rt.flow, d.matric->all_at_ids(), cfg, sc_.params.score_weights, t);
  if (!decision.handover) return;
  std::string old_at = rt.flow.attachments.front().at_id;
  d.matric->execute_handover(rt.flow, decision.target, t);
  invariant(rt.flow.attachments.size() >= 1, "handover lost the attachment");
  update_at_power(d, old_at);
  update_at_power(d, decision.target);
  d.at_last_busy[old_at] = t;
  d.at_last_busy[decision.target] = t;
  ++handovers_;
  ++rt.handovers;
}

void Engine::on_flow_handover_eval(const std::string& key) {
  FlowRt& rt = flows_.at(key);
  if (!rt.flow.admitted() || rt.released_at >= 0) return;
  try_handover(rt, kernel_.now());
  SimTime next = kernel_.now() + sc_.params.handover_period_us;
  if (next <= rt.release_abs) {
    kernel_.schedule(next, rt.key, "handover_eval",
                     [this, key](SimKernel&) { on_flow_handover_eval(key); });
  }
}

void Engine::on_flow_release(const std::string& key) {
  FlowRt& rt = flows_.at(key);
  if (rt.released_at >= 0) return;
  rt.released_at = kernel_.now();
  for (SlaRt& sla : slas_) {
    if (sla.e2e.id != rt.sla_id) continue;
    if (++sla.flows_done == sla.flow_keys.size() &&
        sla.e2e.state == SlaState::active) {
      sla.e2e.state = SlaState::terminated;
    }
  }
  if (!rt.flow.admitted()) return;
  DomainRt& d = domain(rt.domain);
  std::vector<std::string> touched;
  for (const Attachment& leg : rt.flow.attachments) touched.push_back(leg.at_id);
  d.matric->detach(rt.flow);
  for (const std::string& at_id : touched) {
    update_at_power(d, at_id);
    d.at_last_busy[at_id] = kernel_.now();
  }
}

void Engine::on_collect(const std::string& domain_id) {
  DomainRt& d = domain(domain_id);
  for (const auto& [at_id, at] : d.net.ats()) {
    d.matric->collect_metrics(at_id, kernel_.now());
  }
  SimTime next = kernel_.now() + sc_.params.collect_period_us;
  if (next <= sc_.duration_us()) {
    kernel_.schedule(next, "matric." + domain_id, "collect",
                     [this, domain_id](SimKernel&) { on_collect(domain_id); });
  }
}

void Engine::on_energy_tick() {
  integrator_.flush(kernel_.now());
  SimTime next = kernel_.now() + sc_.params.energy_period_us;
  if (next <= sc_.duration_us()) {
    kernel_.schedule(next, "energy", "account",
                     [this](SimKernel&) { on_energy_tick(); });
  }
}

void Engine::on_sleep_patrol() {
  for (const std::string& id : domain_order_) {
    DomainRt& d = domain(id);
    for (const auto& [at_id, at] : d.net.ats()) {
      if (at.state == AtState::active && at.committed_bps == 0 &&
          kernel_.now() - d.at_last_busy[at_id] >=
              sc_.params.sleep_idle_threshold_us) {
        d.net.set_sleep(at_id, true);
        update_at_power(d, at_id);
      }
    }
  }
  SimTime period = std::max<SimTime>(sc_.params.sleep_idle_threshold_us,
                                     sc_.params.collect_period_us);
  SimTime next = kernel_.now() + period;
  if (next <= sc_.duration_us()) {
    kernel_.schedule(next, "energy", "sleep_patrol",
                     [this](SimKernel&) { on_sleep_patrol(); });
  }
}

void Engine::on_scale_check(const std::string& domain_id) {
  scale_domain(domain_id);
  SimTime next = kernel_.now() + sc_.params.scale_period_us;
  if (next <= sc_.duration_us()) {
    kernel_.schedule(next, "orch." + domain_id, "scale_check",
                     [this, domain_id](SimKernel&) {
                       on_scale_check(domain_id);
                     });
  }
}

void Engine::scale_domain(const std::string& domain_id) {
  DomainRt& d = domain(domain_id);
  double load = d.net.total_capacity_bps() > 0
                    ? double(d.net.total_committed_bps()) /
                          double(d.net.total_capacity_bps())
                    : 0.0;
  for (ChainRt& chain : chains_) {
    if (chain.domain != domain_id || !chain.placed) continue;
    ResourceUsage usage;
    for (const ServiceFunction& f : chain.nominal.functions) {
      usage.cpu_units += double(f.cpu_units) * load;
      usage.mem_mb += double(f.mem_mb) * load;
      usage.egress_bps += double(f.egress_bps) * load;
    }
    chain.history.push_back(usage);
    Profile profile = profile_predict(chain.history, sc_.params.ewma_alpha);
    std::vector<ScaleAction> actions =
        d.orch->scale_service(chain.current, profile, chain.plan);
    if (actions.empty()) continue;

    if (actions.front().type == ScaleActionType::re_place) {
      d.orch->release_service(chain.current, chain.plan);
      try {
        chain.plan = d.orch->place_service(chain.current);
        ++replacements_;
      } catch (const SimError& e) {
        d.orch->commit_plan(chain.current, chain.plan);
        warnings_.push_back("chain " + chain.current.id +
                            ": re-place failed: " + e.what());
      }
      for (const std::string& node_id : chain.plan.assignments) {
        update_node_power(d, node_id);
      }
      continue;
    }
    for (const ScaleAction& action : actions) {
      d.orch->apply_scale(chain.current, chain.plan, action);
      ++scale_actions_;
    }
    std::set<std::string> touched(chain.plan.assignments.begin(),
                                  chain.plan.assignments.end());
    for (const std::string& node_id : touched) update_node_power(d, node_id);
  }
}

RunReport Engine::execute() {
  build_domains();
  build_groups();
  schedule_periodics();
  kernel_.run_until(sc_.duration_us());
  integrator_.flush(sc_.duration_us());
  return build_report();
}

RunReport Engine::build_report() {
  RunReport out;

  // --- report.csv ----------------------------------------------------------
  std::string csv = "sla_id,kpi,measured,bound,pass\n";
  auto row = [&](const std::string& sla_id, const std::string& kpi,
                 const KpiAgg& agg, double bound, bool evaluated_pass) {
    csv += sla_id + "," + kpi + ",";
    csv += agg.seen ? fmt_double(agg.worst) : "na";
    csv += "," + fmt_double(bound) + ",";
    csv += evaluated_pass ? "1" : "0";
    csv += "\n";
  };
  for (const SlaRt& sla : slas_) {
    for (const std::string& key : sla.flow_keys) {
      const FlowRt& rt = flows_.at(key);
      std::string sla_id = sla.e2e.id + "." + rt.domain + "." + rt.flow.id;
      bool base_ok = !rt.admission_failed;
      row(sla_id, percentile_label(rt.leg_kpi.latency_percentile), rt.latency,
          double(rt.leg_kpi.latency_bound_us), rt.latency.pass && base_ok);
      if (rt.leg_kpi.jitter_bound_us) {
        row(sla_id, "jitter", rt.jitter, double(*rt.leg_kpi.jitter_bound_us),
            rt.jitter.pass && base_ok);
      }
      row(sla_id, "throughput", rt.throughput,
          double(rt.leg_kpi.throughput_dl_bps), rt.throughput.pass && base_ok);
      row(sla_id, "reliability", rt.reliability, rt.leg_kpi.reliability_min,
          rt.reliability.pass && base_ok);
    }
  }
  out.report_csv = std::move(csv);

  // --- energy.csv ----------------------------------------------------------
  std::string energy = "component,joules\n";
  for (const auto& [component, joules] : ledger_.by_component()) {
    energy += component + "," + fmt_double(joules) + "\n";
  }
  energy += "total," + fmt_double(ledger_.total_joules()) + "\n";
  energy += "delivered_bits," + std::to_string(ledger_.delivered_bits()) + "\n";
  energy +=
      "bits_per_joule," + fmt_double(ledger_.efficiency_bits_per_joule()) +
      "\n";
  out.energy_csv = std::move(energy);

  // --- trace ---------------------------------------------------------------
  out.trace_text = kernel_.trace_text();

  // --- summary.json --------------------------------------------------------
  json summary;
  summary["seed"] = sc_.seed;
  summary["duration_s"] = sc_.duration_s;
  summary["trace_digest"] = [&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  (unsigned long long)fnv1a64(out.trace_text));
    return std::string(buf);
  }();

  json slas = json::array();
  for (const SlaRt& sla : slas_) {
    json s;
    s["id"] = sla.e2e.id;
    s["kind"] = std::string(use_case_name(sla.intent.kind));
    s["zone"] = sla.intent.zone;
    s["user_count"] = sla.intent.user_count;
    s["domain_path"] = sla.e2e.domain_path;
    s["state"] = std::string(sla_state_name(sla.e2e.state));
    if (sla.first_violation_us >= 0) {
      s["first_violation_us"] = sla.first_violation_us;
    } else {
      s["first_violation_us"] = nullptr;
    }
    s["controls"] = {{"did_layers", sla.controls.did_layers},
                     {"soc", std::string(soc_name(sla.controls.soc_level))}};
    if (!sla.setup_error.empty()) s["setup_error"] = sla.setup_error;
    json budgets = json::array();
    for (const DomainSla& d : sla.decomposed) {
      json b;
      b["domain"] = d.domain;
      b["latency_budget_us"] = d.kpi.latency_bound_us;
      if (d.kpi.jitter_bound_us) b["jitter_budget_us"] = *d.kpi.jitter_bound_us;
      b["reliability_budget"] = d.kpi.reliability_min;
      b["throughput_dl_bps"] = d.kpi.throughput_dl_bps;
      b["throughput_ul_bps"] = d.kpi.throughput_ul_bps;
      budgets.push_back(b);
    }
    s["decomposition"] = budgets;
    json flows = json::array();
    for (const std::string& key : sla.flow_keys) {
      const FlowRt& rt = flows_.at(key);
      json f;
      f["id"] = rt.flow.id;
      f["domain"] = rt.domain;
      f["demand_bps"] = rt.tmpl.demand_bps;
      f["admitted"] = !rt.admission_failed && rt.admitted_at >= 0;
      f["handovers"] = rt.handovers;
      f["share_increases"] = rt.share_increases;
      f["delivered_bits"] = rt.delivered_total;
      flows.push_back(f);
    }
    s["flows"] = flows;
    slas.push_back(s);
  }
  summary["slas"] = slas;

  json placements = json::array();
  for (const ChainRt& chain : chains_) {
    json p;
    p["chain"] = chain.nominal.id;
    p["domain"] = chain.domain;
    if (chain.placed) {
      p["assignments"] = chain.plan.assignments;
      p["est_power_w"] = chain.plan.est_power_w;
      p["est_latency_us"] = chain.plan.est_latency_us;
      p["cost"] = chain.plan.cost;
    } else {
      p["error"] = chain.error;
    }
    placements.push_back(p);
  }
  summary["placements"] = placements;

  // Load drift per AT: first half of the run as reference, second half as
  // the current window.
  json drift = json::array();
  for (const std::string& id : domain_order_) {
    DomainRt& d = domain(id);
    for (const auto& [at_id, at] : d.net.ats()) {
      std::vector<MetricSample> samples =
          d.matric->query_telemetry(at_id, TelemetryKind::load, 0);
      if (samples.size() < 4) continue;
      std::vector<double> ref, cur;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        (i < samples.size() / 2 ? ref : cur).push_back(samples[i].value);
      }
      DriftReport r = detect_drift(ref, cur);
      json dj;
      dj["component"] = at_id;
      dj["mean_shift"] = r.mean_shift;
      dj["threshold"] = r.threshold;
      dj["drifted"] = r.drifted;
      drift.push_back(dj);
    }
  }
  summary["drift"] = drift;

  if (sc_.toggles.explain) summary["explanations"] = explanations_;
  summary["warnings"] = warnings_;

  json counts;
  counts["events"] = kernel_.events_delivered();
  counts["flows_total"] = flow_order_.size();
  std::size_t admitted = 0;
  for (const auto& [key, rt] : flows_) {
    if (rt.admitted_at >= 0) ++admitted;
  }
  counts["flows_admitted"] = admitted;
  counts["admission_failures"] = admission_failures_;
  counts["window_violations"] = window_violations_;
  counts["handovers"] = handovers_;
  counts["escalations"] = escalations_;
  counts["share_increases"] = share_increases_;
  counts["scale_actions"] = scale_actions_;
  counts["replacements"] = replacements_;
  summary["counts"] = counts;
  if (first_violation_us_ >= 0) {
    summary["first_violation_us"] = first_violation_us_;
  } else {
    summary["first_violation_us"] = nullptr;
  }

  json energy_summary;
  energy_summary["total_joules"] = ledger_.total_joules();
  energy_summary["delivered_bits"] = ledger_.delivered_bits();
  energy_summary["bits_per_joule"] = ledger_.efficiency_bits_per_joule();
  energy_summary["tbit_per_joule"] =
      ledger_.efficiency_bits_per_joule() / 1e12;
  summary["energy"] = energy_summary;

  out.summary_json = summary.dump(2) + "\n";

  out.events_delivered = kernel_.events_delivered();
  out.flows_total = flow_order_.size();
  out.flows_admitted = admitted;
  out.admission_failures = admission_failures_;
  out.window_violations = window_violations_;
  out.handovers = handovers_;
  out.escalations = escalations_;
  out.first_violation_us = first_violation_us_;
  out.total_joules = ledger_.total_joules();
  out.delivered_bits = ledger_.delivered_bits();
  return out;
}

}  // namespace

RunReport run(const Scenario& scenario) {
  scenario.validate();
  Engine engine(scenario);
  return engine.execute();
}

void write_outputs(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    require(out.good(), Errc::validation_error,
            "cannot write " + (fs::path(dir) / name).string());
    out << content;
  };
  write("report.csv", report.report_csv);
  write("energy.csv", report.energy_csv);
  write("summary.json", report.summary_json);
  write("trace.txt", report.trace_text);
}

}  // namespace orchsim
