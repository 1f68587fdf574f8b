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

#ifndef ORCHSIM_WORKLOADS_HPP
#define ORCHSIM_WORKLOADS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/common.hpp"
#include "orchsim/inter_orch.hpp"
#include "orchsim/kpi.hpp"
#include "orchsim/rng.hpp"

namespace orchsim {

enum class ArrivalKind { all_at_start, poisson };

struct Arrival {
  ArrivalKind kind = ArrivalKind::all_at_start;
  double rate_per_s = 1.0;  // poisson only
};

/// Partial KPI override merged over the use-case preset.
struct KpiOverride {
  std::optional<std::int64_t> latency_bound_us;
  std::optional<double> latency_percentile;
  std::optional<std::int64_t> jitter_bound_us;
  std::optional<std::int64_t> throughput_dl_bps;
  std::optional<std::int64_t> throughput_ul_bps;
  std::optional<double> reliability_min;
  std::optional<double> positioning_cm;
  std::optional<std::int64_t> sync_bound_us;

  bool any() const;
  void apply(KpiRequirementSet& kpi) const;
};

struct UseCaseSpec {
  std::string name;  // scenario-unique label, used to derive ids
  UseCaseKind kind = UseCaseKind::metaverse;
  std::int64_t user_count = 1;
  double area_m2 = 1.0;
  double duration_s = 60.0;
  double start_s = 0.0;
  Arrival arrival;
  std::string zone;
  std::optional<InteractionClass> interaction_class;
  RiskLevel risk = RiskLevel::low;
  std::optional<KpiOverride> kpi_override;

  void validate() const;
};

struct FlowTemplate {
  std::string id;
  std::string ue;
  std::string zone;
  std::int64_t demand_bps = 0;
  KpiRequirementSet kpi;
  SimTime arrival_us = 0;   // relative to workload start
  SimTime release_us = 0;   // relative to workload start
};

struct GeneratedWorkload {
  TaskIntent intent;
  std::vector<FlowTemplate> flows;
  std::vector<std::string> warnings;
};

/// Per-user metaverse flows: symmetric demand drawn uniformly from the
/// 5-100 Gbps band unless overridden.
GeneratedWorkload gen_metaverse(const UseCaseSpec& spec, RngStream& rng);

/// Per participant: one UHD stream (20-50 Mbps), one audio stream
/// (0.048-3 Mbps), one 64 Kbps ancillary stream, plus a shared 10 Gbps
/// edge/cloud trunk bounded at 50 ms / 10 ms jitter.
GeneratedWorkload gen_virtual_production(const UseCaseSpec& spec,
                                         RngStream& rng);

/// Digital-twin flows: DL 0.1-10 Gbps, UL 0.05-5 Gbps per twin.
GeneratedWorkload gen_digital_twin(const UseCaseSpec& spec, RngStream& rng);

/// Factory flows: 1 Gbps synchronisation feeds (factory_dt) or 1 Mbps
/// sub-cm control loops (factory_robotics).
GeneratedWorkload gen_factory(const UseCaseSpec& spec, RngStream& rng);

/// Dispatch on spec.kind.
GeneratedWorkload generate_workload(const UseCaseSpec& spec, RngStream& rng);

}  // namespace orchsim

#endif  // ORCHSIM_WORKLOADS_HPP
