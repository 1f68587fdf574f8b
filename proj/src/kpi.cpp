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

#include "orchsim/kpi.hpp"

namespace orchsim {

std::string_view use_case_name(UseCaseKind k) {
  switch (k) {
    case UseCaseKind::metaverse: return "metaverse";
    case UseCaseKind::digital_twin: return "digital_twin";
    case UseCaseKind::virtual_production: return "virtual_production";
    case UseCaseKind::factory_dt: return "factory_dt";
    case UseCaseKind::factory_robotics: return "factory_robotics";
  }
  return "unknown";
}

std::optional<UseCaseKind> use_case_from_name(std::string_view s) {
  if (s == "metaverse") return UseCaseKind::metaverse;
  if (s == "digital_twin") return UseCaseKind::digital_twin;
  if (s == "virtual_production") return UseCaseKind::virtual_production;
  if (s == "factory_dt") return UseCaseKind::factory_dt;
  if (s == "factory_robotics") return UseCaseKind::factory_robotics;
  return std::nullopt;
}

std::string_view interaction_name(InteractionClass c) {
  switch (c) {
    case InteractionClass::near_live: return "near_live";
    case InteractionClass::two_way: return "two_way";
    case InteractionClass::multi_way: return "multi_way";
    case InteractionClass::remote_music: return "remote_music";
  }
  return "unknown";
}

std::optional<InteractionClass> interaction_from_name(std::string_view s) {
  if (s == "near_live") return InteractionClass::near_live;
  if (s == "two_way") return InteractionClass::two_way;
  if (s == "multi_way") return InteractionClass::multi_way;
  if (s == "remote_music") return InteractionClass::remote_music;
  return std::nullopt;
}

void KpiRequirementSet::validate(const std::string& context) const {
  require(latency_bound_us > 0, Errc::validation_error,
          context + ": latency_bound_us must be positive");
  require(latency_percentile > 0.0 && latency_percentile < 1.0,
          Errc::validation_error,
          context + ": latency_percentile must lie in (0,1)");
  require(!jitter_bound_us || *jitter_bound_us > 0, Errc::validation_error,
          context + ": jitter_bound_us must be positive");
  require(throughput_dl_bps > 0 && throughput_ul_bps > 0,
          Errc::validation_error, context + ": throughput must be positive");
  require(reliability_min > 0.0 && reliability_min <= 1.0,
          Errc::validation_error,
          context + ": reliability_min must lie in (0,1]");
  require(!positioning_cm || *positioning_cm > 0.0, Errc::validation_error,
          context + ": positioning_cm must be positive");
  require(!sync_bound_us || *sync_bound_us > 0, Errc::validation_error,
          context + ": sync_bound_us must be positive");
}

}  // namespace orchsim
