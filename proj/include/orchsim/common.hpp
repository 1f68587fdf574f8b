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

#ifndef ORCHSIM_COMMON_HPP
#define ORCHSIM_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orchsim {

// Logical simulation time, integer microseconds since scenario start.
using SimTime = std::int64_t;

inline constexpr SimTime kUsPerMs = 1000;
inline constexpr SimTime kUsPerSec = 1000000;

inline SimTime ms(std::int64_t v) { return v * kUsPerMs; }
inline SimTime seconds(std::int64_t v) { return v * kUsPerSec; }

// Error vocabulary shared across modules. Each value maps 1:1 onto a
// documented failure mode of some operation.
enum class Errc {
  scheduling_in_past,
  at_sleeping,
  at_busy,
  insufficient_capacity,
  not_attached,
  duplicate_id,
  unknown_at,
  no_coverage,
  no_feasible_at,
  unknown_use_case,
  infeasible_budget,
  no_feasible_domain,
  no_feasible_placement,
  empty_history,
  duplicate_topic,
  unknown_topic,
  empty_window,
  missing_kpi,
  non_monotonic_interval,
  too_many_features,
  kind_mismatch,
  parse_error,
  validation_error,
};

std::string_view errc_name(Errc c);

class SimError : public std::runtime_error {
 public:
  SimError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw SimError(code, what);
}

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Always-on internal consistency check, kept in every build type.
inline void invariant(bool cond, const std::string& what) {
  if (!cond) throw std::logic_error("invariant violated: " + what);
}

// 64-bit FNV-1a. Used for stable string hashing (rng stream derivation,
// trace digests); must stay platform-independent.
std::uint64_t fnv1a64(std::string_view s);

// SplitMix64 finalizer; bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

// Shortest stable decimal rendering used in CSV output ("%.9g").
std::string fmt_double(double v);

}  // namespace orchsim

#endif  // ORCHSIM_COMMON_HPP
