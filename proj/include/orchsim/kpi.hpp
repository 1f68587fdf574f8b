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

#ifndef ORCHSIM_KPI_HPP
#define ORCHSIM_KPI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "orchsim/common.hpp"

namespace orchsim {

enum class UseCaseKind {
  metaverse,
  digital_twin,
  virtual_production,
  factory_dt,
  factory_robotics,
};

/// Interaction levels for virtual production, ordered by interactivity
/// (near_live is the most tolerant, remote_music the tightest).
enum class InteractionClass {
  near_live,
  two_way,
  multi_way,
  remote_music,
};

std::string_view use_case_name(UseCaseKind k);
std::optional<UseCaseKind> use_case_from_name(std::string_view s);
std::string_view interaction_name(InteractionClass c);
std::optional<InteractionClass> interaction_from_name(std::string_view s);

/// Quantitative bounds a service contract is evaluated against. Latency and
/// jitter are upper bounds, throughput and reliability lower bounds; the
/// optional fields are static feasibility constraints checked at admission.
struct KpiRequirementSet {
  std::int64_t latency_bound_us = 0;
  double latency_percentile = 0.99;
  std::optional<std::int64_t> jitter_bound_us;
  std::int64_t throughput_dl_bps = 0;
  std::int64_t throughput_ul_bps = 0;
  double reliability_min = 0.999;
  std::optional<double> positioning_cm;
  std::optional<std::int64_t> sync_bound_us;

  /// Larger of the two directions; a symmetric flow occupies one AT share.
  std::int64_t peak_throughput_bps() const {
    return throughput_dl_bps > throughput_ul_bps ? throughput_dl_bps
                                                 : throughput_ul_bps;
  }

  void validate(const std::string& context) const;
};

}  // namespace orchsim

#endif  // ORCHSIM_KPI_HPP
