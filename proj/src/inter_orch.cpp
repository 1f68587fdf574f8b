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

#include "orchsim/inter_orch.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace orchsim {

void TaskIntent::validate() const {
  require(user_count >= 1, Errc::validation_error,
          "intent user_count must be at least 1");
  require(area_m2 > 0.0, Errc::validation_error,
          "intent area_m2 must be positive");
  require(!zone.empty(), Errc::validation_error, "intent zone must be set");
  if (kind == UseCaseKind::virtual_production) {
    require(interaction_class.has_value(), Errc::validation_error,
            "virtual_production intent needs an interaction_class");
  }
}

KpiRequirementSet translate_intent(const TaskIntent& intent) {
  intent.validate();
  KpiRequirementSet kpi;
  kpi.latency_percentile = 0.99;
  switch (intent.kind) {
    case UseCaseKind::metaverse:
      kpi.latency_bound_us = 20 * kUsPerMs;
      kpi.throughput_dl_bps = 5'000'000'000;  // symmetric per user
      kpi.throughput_ul_bps = 5'000'000'000;
      kpi.reliability_min = 0.999999;
      kpi.positioning_cm = 1.0;  // sub-cm accuracy
      return kpi;
    case UseCaseKind::digital_twin:
      kpi.latency_bound_us = 20 * kUsPerMs;
      kpi.throughput_dl_bps = 100'000'000;
      kpi.throughput_ul_bps = 50'000'000;
      kpi.reliability_min = 0.999;
      kpi.positioning_cm = 10.0;
      return kpi;
    case UseCaseKind::virtual_production: {
      switch (*intent.interaction_class) {
        case InteractionClass::remote_music:
          kpi.latency_bound_us = 15 * kUsPerMs;
          kpi.jitter_bound_us = 1 * kUsPerMs;
          break;
        case InteractionClass::two_way:
          kpi.latency_bound_us = 50 * kUsPerMs;
          kpi.jitter_bound_us = 25 * kUsPerMs;
          break;
        case InteractionClass::multi_way:
          kpi.latency_bound_us = 150 * kUsPerMs;
          kpi.jitter_bound_us = 50 * kUsPerMs;
          break;
        case InteractionClass::near_live:
          kpi.latency_bound_us = 1700 * kUsPerMs;
          // no jitter bound at this interactivity level
          break;
      }
      // One UHD + one audio + one ancillary stream per participant,
      // each at the guaranteed floor of its rate band.
      kpi.throughput_dl_bps = 20'000'000 + 48'000 + 64'000;
      kpi.throughput_ul_bps = kpi.throughput_dl_bps;
      kpi.reliability_min = 0.999;
      kpi.sync_bound_us = 2000;  // single-device clock sync tolerance
      return kpi;
    }
    case UseCaseKind::factory_dt:
      // Table tolerance reads "latency above 20 ms is acceptable"; the
      // bound is pinned at that edge rather than silently tightened.
      kpi.latency_bound_us = 20 * kUsPerMs;
      kpi.throughput_dl_bps = 1'000'000'000;
      kpi.throughput_ul_bps = 1'000'000'000;
      kpi.reliability_min = 0.999;
      kpi.positioning_cm = 10.0;  // cm-level accuracy
      return kpi;
    case UseCaseKind::factory_robotics:
      kpi.latency_bound_us = 20 * kUsPerMs;
      kpi.throughput_dl_bps = 1'000'000;  // control traffic ceiling
      kpi.throughput_ul_bps = 1'000'000;
      kpi.reliability_min = 0.999;
      kpi.positioning_cm = 1.0;  // sub-cm accuracy
      return kpi;
  }
  fail(Errc::unknown_use_case, "unrecognised use case kind");
}

std::string_view sla_state_name(SlaState s) {
  switch (s) {
    case SlaState::proposed: return "proposed";
    case SlaState::active: return "active";
    case SlaState::violated: return "violated";
    case SlaState::terminated: return "terminated";
  }
  return "unknown";
}

std::vector<DomainSla> decompose_sla(const E2eSla& sla,
                                     const std::vector<CapabilityRecord>& caps) {
  require(!sla.domain_path.empty(), Errc::validation_error,
          "SLA " + sla.id + " has an empty domain path");
  require(caps.size() == sla.domain_path.size(), Errc::validation_error,
          "SLA " + sla.id + ": capability record per path domain required");

  const std::size_t k = sla.domain_path.size();
  std::int64_t min_latency_sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    invariant(caps[i].domain == sla.domain_path[i],
              "capability order must follow the domain path");
    min_latency_sum += caps[i].min_latency_us;
  }
  require(min_latency_sum <= sla.kpi.latency_bound_us, Errc::infeasible_budget,
          "SLA " + sla.id + ": path floor " + std::to_string(min_latency_sum) +
              "us exceeds bound " + std::to_string(sla.kpi.latency_bound_us) +
              "us");

  std::vector<DomainSla> out;
  out.reserve(k);
  std::int64_t latency_used = 0;
  std::int64_t jitter_used = 0;
  double reliability_share =
      k == 1 ? sla.kpi.reliability_min
             : std::pow(sla.kpi.reliability_min, 1.0 / double(k));

  for (std::size_t i = 0; i < k; ++i) {
    DomainSla d;
    d.parent = sla.id;
    d.domain = sla.domain_path[i];
    d.kpi = sla.kpi;
    if (i + 1 == k) {
      d.kpi.latency_bound_us = sla.kpi.latency_bound_us - latency_used;
    } else if (min_latency_sum > 0) {
      d.kpi.latency_bound_us = sla.kpi.latency_bound_us *
                               caps[i].min_latency_us / min_latency_sum;
    } else {
      d.kpi.latency_bound_us = sla.kpi.latency_bound_us / std::int64_t(k);
    }
    latency_used += d.kpi.latency_bound_us;

    if (sla.kpi.jitter_bound_us) {
      if (i + 1 == k) {
        d.kpi.jitter_bound_us = *sla.kpi.jitter_bound_us - jitter_used;
      } else if (min_latency_sum > 0) {
        d.kpi.jitter_bound_us = *sla.kpi.jitter_bound_us *
                                caps[i].min_latency_us / min_latency_sum;
      } else {
        d.kpi.jitter_bound_us = *sla.kpi.jitter_bound_us / std::int64_t(k);
      }
      jitter_used += *d.kpi.jitter_bound_us;
    }
    d.kpi.reliability_min = reliability_share;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<TaskIntent> compose_requests(const std::vector<TaskIntent>& intents) {
  std::vector<TaskIntent> out;
  auto same_group = [](const TaskIntent& a, const TaskIntent& b) {
    return a.kind == b.kind && a.zone == b.zone &&
           a.interaction_class == b.interaction_class;
  };
  for (const TaskIntent& intent : intents) {
    bool merged = false;
    for (TaskIntent& group : out) {
      if (same_group(group, intent)) {
        group.user_count += intent.user_count;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(intent);
  }
  return out;
}

std::string_view policy_issuer_name(PolicyIssuer p) {
  switch (p) {
    case PolicyIssuer::government: return "government";
    case PolicyIssuer::regulator: return "regulator";
    case PolicyIssuer::business: return "business";
    case PolicyIssuer::customer: return "customer";
  }
  return "unknown";
}

std::optional<PolicyIssuer> policy_issuer_from_name(std::string_view s) {
  if (s == "government") return PolicyIssuer::government;
  if (s == "regulator") return PolicyIssuer::regulator;
  if (s == "business") return PolicyIssuer::business;
  if (s == "customer") return PolicyIssuer::customer;
  return std::nullopt;
}

bool Policy::matches(const TaskIntent& intent, const std::string& domain) const {
  if (!kinds.empty() &&
      std::find(kinds.begin(), kinds.end(), intent.kind) == kinds.end()) {
    return false;
  }
  if (!zones.empty() &&
      std::find(zones.begin(), zones.end(), intent.zone) == zones.end()) {
    return false;
  }
  if (!domains.empty() &&
      std::find(domains.begin(), domains.end(), domain) == domains.end()) {
    return false;
  }
  return true;
}

std::vector<std::string> apply_policies(const std::vector<std::string>& candidates,
                                        const TaskIntent& intent,
                                        const std::vector<Policy>& policies) {
  std::vector<const Policy*> ordered;
  ordered.reserve(policies.size());
  for (const Policy& p : policies) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(), [](const Policy* a, const Policy* b) {
    if (a->priority != b->priority) return a->priority > b->priority;
    return a->id < b->id;  // priorities are unique per set; id is a safety net
  });

  std::vector<std::string> admissible;
  for (const std::string& domain : candidates) {
    bool allowed = true;
    for (const Policy* p : ordered) {
      if (p->matches(intent, domain)) {
        allowed = p->action == PolicyAction::allow;
        break;  // first match wins
      }
    }
    if (allowed) admissible.push_back(domain);
  }
  return admissible;
}

std::vector<std::string> select_domains(const TaskIntent& intent,
                                        const KpiRequirementSet& kpi,
                                        const std::vector<CapabilityRecord>& caps,
                                        const std::vector<Policy>& policies) {
  require(!caps.empty(), Errc::no_feasible_domain, "no capability records");

  std::vector<std::string> all_ids;
  std::map<std::string, const CapabilityRecord*> by_id;
  for (const CapabilityRecord& c : caps) {
    all_ids.push_back(c.domain);
    by_id[c.domain] = &c;
  }
  std::sort(all_ids.begin(), all_ids.end());
  std::vector<std::string> admissible = apply_policies(all_ids, intent, policies);

  const std::int64_t per_flow_bps = kpi.peak_throughput_bps();
  auto covers_zone = [&](const CapabilityRecord& c) {
    return std::find(c.prefixes.begin(), c.prefixes.end(), intent.zone) !=
           c.prefixes.end();
  };
  auto has_capacity = [&](const CapabilityRecord& c) {
    return c.free_bps >= per_flow_bps;
  };
  double gbps = double(per_flow_bps) * double(intent.user_count) / 1e9;

  std::vector<std::string> best;
  double best_cost = 0.0;
  auto consider = [&](std::vector<std::string> path, double cost) {
    bool better = best.empty() || cost < best_cost;
    if (!better && !best.empty() && cost == best_cost) {
      if (path.size() != best.size()) {
        better = path.size() < best.size();
      } else {
        better = path < best;
      }
    }
    if (better) {
      best = std::move(path);
      best_cost = cost;
    }
  };

  for (const std::string& id : admissible) {
    const CapabilityRecord& c = *by_id.at(id);
    if (!covers_zone(c) || !has_capacity(c)) continue;
    if (c.min_latency_us > kpi.latency_bound_us) continue;
    if (c.reliability_floor < kpi.reliability_min) continue;
    consider({id}, c.unit_cost_per_gbps * gbps);
  }
  for (const std::string& transit : admissible) {
    for (const std::string& serving : admissible) {
      if (transit == serving) continue;
      const CapabilityRecord& a = *by_id.at(transit);
      const CapabilityRecord& b = *by_id.at(serving);
      if (!covers_zone(b)) continue;  // transit leg needs no coverage
      if (!has_capacity(a) || !has_capacity(b)) continue;
      if (a.min_latency_us + b.min_latency_us > kpi.latency_bound_us) continue;
      if (a.reliability_floor * b.reliability_floor < kpi.reliability_min)
        continue;
      consider({transit, serving},
               (a.unit_cost_per_gbps + b.unit_cost_per_gbps) * gbps);
    }
  }
  require(!best.empty(), Errc::no_feasible_domain,
          "no admissible path of length <= 2 covers zone " + intent.zone);
  return best;
}

std::string_view risk_name(RiskLevel r) {
  switch (r) {
    case RiskLevel::low: return "low";
    case RiskLevel::medium: return "medium";
    case RiskLevel::high: return "high";
  }
  return "unknown";
}

std::optional<RiskLevel> risk_from_name(std::string_view s) {
  if (s == "low") return RiskLevel::low;
  if (s == "medium") return RiskLevel::medium;
  if (s == "high") return RiskLevel::high;
  return std::nullopt;
}

std::string_view soc_name(SocLevel s) {
  switch (s) {
    case SocLevel::baseline: return "baseline";
    case SocLevel::hardened: return "hardened";
    case SocLevel::rigorous: return "rigorous";
  }
  return "unknown";
}

SecurityControlPlan select_controls(RiskLevel risk) {
  switch (risk) {
    case RiskLevel::low: return {1, SocLevel::baseline};
    case RiskLevel::medium: return {2, SocLevel::hardened};
    case RiskLevel::high: return {3, SocLevel::rigorous};
  }
  return {1, SocLevel::baseline};
}

}  // namespace orchsim
