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

#ifndef ORCHSIM_INTER_ORCH_HPP
#define ORCHSIM_INTER_ORCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/common.hpp"
#include "orchsim/intra_orch.hpp"
#include "orchsim/kpi.hpp"

namespace orchsim {

/// High-level service request as it arrives at the inter-domain
/// orchestrator, before translation into KPI bounds.
struct TaskIntent {
  UseCaseKind kind = UseCaseKind::metaverse;
  std::int64_t user_count = 1;
  double area_m2 = 1.0;
  std::string zone;
  std::optional<InteractionClass> interaction_class;  // virtual_production

  void validate() const;
};

/// Maps a use case onto its quantitative KPI preset. Virtual production
/// picks latency/jitter from the interaction class (near_live 1700 ms,
/// two_way 50 ms / 25 ms, multi_way 150 ms / 50 ms, remote_music
/// 15 ms / 1 ms).
KpiRequirementSet translate_intent(const TaskIntent& intent);

enum class SlaState { proposed, active, violated, terminated };

std::string_view sla_state_name(SlaState s);

struct E2eSla {
  std::string id;
  KpiRequirementSet kpi;
  std::vector<std::string> domain_path;
  SlaState state = SlaState::proposed;
};

struct DomainSla {
  std::string parent;
  std::string domain;
  KpiRequirementSet kpi;
};

/// Splits an end-to-end contract into per-domain budgets:
///  - latency and jitter proportionally to advertised min latency, in
///    integer microseconds with the remainder on the last domain, so the
///    budgets sum back exactly;
///  - reliability geometrically (k-th root), so budgets multiply back;
///  - throughput copied to every domain.
std::vector<DomainSla> decompose_sla(const E2eSla& sla,
                                     const std::vector<CapabilityRecord>& caps);

/// Merges intents with identical (kind, zone, interaction class) into one
/// intent with the summed user count; group order follows first occurrence.
std::vector<TaskIntent> compose_requests(const std::vector<TaskIntent>& intents);

enum class PolicyIssuer { government, regulator, business, customer };
enum class PolicyAction { allow, deny };

std::string_view policy_issuer_name(PolicyIssuer p);
std::optional<PolicyIssuer> policy_issuer_from_name(std::string_view s);

/// Match-based rule over (intent, domain) pairs; empty selector sets match
/// anything.
struct Policy {
  std::string id;
  PolicyIssuer issuer = PolicyIssuer::business;
  int priority = 0;
  PolicyAction action = PolicyAction::allow;
  std::vector<UseCaseKind> kinds;     // empty = any kind
  std::vector<std::string> zones;     // empty = any zone
  std::vector<std::string> domains;   // empty = any domain

  bool matches(const TaskIntent& intent, const std::string& domain) const;
};

/// First-match-wins filtering in descending priority order; unmatched
/// candidates stay admissible.
std::vector<std::string> apply_policies(const std::vector<std::string>& candidates,
                                        const TaskIntent& intent,
                                        const std::vector<Policy>& policies);

/// Cheapest feasible path of at most two domains. A single-domain path must
/// cover the zone; a two-domain path is transit + serving, where only the
/// last domain needs coverage. Feasibility per domain: advertised free
/// capacity carries one contract flow (kpi peak throughput), the latency
/// floor fits the bound (summed along a path) and the reliability floor
/// reaches the minimum (multiplied along a path). Cost is the sum of
/// unit_cost * aggregate Gbps (kpi peak times user count) over the path;
/// ties prefer shorter paths, then the lexicographically smaller sequence.
std::vector<std::string> select_domains(const TaskIntent& intent,
                                        const KpiRequirementSet& kpi,
                                        const std::vector<CapabilityRecord>& caps,
                                        const std::vector<Policy>& policies);

enum class RiskLevel { low, medium, high };
enum class SocLevel { baseline, hardened, rigorous };

std::string_view risk_name(RiskLevel r);
std::optional<RiskLevel> risk_from_name(std::string_view s);
std::string_view soc_name(SocLevel s);

struct SecurityControlPlan {
  int did_layers = 1;
  SocLevel soc_level = SocLevel::baseline;
};

/// Rule table: low -> (1, baseline), medium -> (2, hardened),
/// high -> (3, rigorous).
SecurityControlPlan select_controls(RiskLevel risk);

}  // namespace orchsim

#endif  // ORCHSIM_INTER_ORCH_HPP
