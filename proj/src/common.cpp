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

#include "orchsim/common.hpp"

#include <cstdio>

namespace orchsim {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::scheduling_in_past: return "SchedulingInPast";
    case Errc::at_sleeping: return "AtSleeping";
    case Errc::at_busy: return "AtBusy";
    case Errc::insufficient_capacity: return "InsufficientCapacity";
    case Errc::not_attached: return "NotAttached";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::unknown_at: return "UnknownAt";
    case Errc::no_coverage: return "NoCoverage";
    case Errc::no_feasible_at: return "NoFeasibleAt";
    case Errc::unknown_use_case: return "UnknownUseCase";
    case Errc::infeasible_budget: return "InfeasibleBudget";
    case Errc::no_feasible_domain: return "NoFeasibleDomain";
    case Errc::no_feasible_placement: return "NoFeasiblePlacement";
    case Errc::empty_history: return "EmptyHistory";
    case Errc::duplicate_topic: return "DuplicateTopic";
    case Errc::unknown_topic: return "UnknownTopic";
    case Errc::empty_window: return "EmptyWindow";
    case Errc::missing_kpi: return "MissingKpi";
    case Errc::non_monotonic_interval: return "NonMonotonicInterval";
    case Errc::too_many_features: return "TooManyFeatures";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
  }
  return "UnknownError";
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace orchsim
