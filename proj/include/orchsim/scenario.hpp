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

#ifndef ORCHSIM_SCENARIO_HPP
#define ORCHSIM_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "orchsim/access_net.hpp"
#include "orchsim/common.hpp"
#include "orchsim/inter_orch.hpp"
#include "orchsim/intra_orch.hpp"
#include "orchsim/matric.hpp"
#include "orchsim/workloads.hpp"

namespace orchsim {

struct Toggles {
  bool sleep_policy = false;
  bool explain = false;
};

/// Engine knobs; every field has a default and is scenario-overridable.
struct SimParams {
  ScoreWeights score_weights;
  double hysteresis = 0.05;
  SimTime min_dwell_us = 100 * kUsPerMs;
  std::int64_t telemetry_capacity = 1024;
  double lambda_w_per_us = 0.001;
  std::int64_t internode_latency_us = 200;
  SimTime window_span_us = kUsPerSec;
  SimTime flow_sample_period_us = 10 * kUsPerMs;
  SimTime collect_period_us = 100 * kUsPerMs;
  SimTime handover_period_us = 100 * kUsPerMs;
  SimTime energy_period_us = kUsPerSec;
  SimTime scale_period_us = 5 * kUsPerSec;
  SimTime sleep_idle_threshold_us = kUsPerSec;
  double ewma_alpha = 0.5;

  void validate() const;
};

struct DomainSpec {
  std::string id;
  double unit_cost_per_gbps = 1.0;
  std::vector<AccessTech> ats;
  std::vector<ComputeNode> nodes;
};

struct Scenario {
  std::uint64_t seed = 0;
  double duration_s = 60.0;
  Toggles toggles;
  SimParams params;
  std::vector<DomainSpec> domains;
  std::vector<Policy> policies;
  std::vector<UseCaseSpec> workloads;

  SimTime duration_us() const {
    return SimTime(duration_s * double(kUsPerSec));
  }

  void validate() const;
};

/// Strict parser: unknown keys are rejected, missing optional fields take
/// documented defaults, and the result always satisfies validate().
Scenario parse_scenario(const std::string& json_text);

Scenario load_scenario(const std::string& path);

/// Canonical full-form serialisation (defaults materialised); parsing the
/// output reproduces the same scenario.
std::string scenario_to_json(const Scenario& sc);

}  // namespace orchsim

#endif  // ORCHSIM_SCENARIO_HPP
