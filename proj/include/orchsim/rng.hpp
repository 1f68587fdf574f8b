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

#ifndef ORCHSIM_RNG_HPP
#define ORCHSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "orchsim/common.hpp"

namespace orchsim {

/// Named, counter-based random stream (SplitMix64). The same (scenario seed,
/// name) pair yields the same sample sequence on every platform; distinct
/// names yield independent streams.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::string name, std::uint64_t scenario_seed)
      : name_(std::move(name)),
        seed_(mix64(scenario_seed ^ fnv1a64(name_))),
        state_(seed_) {}

  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [lo, hi], both ends inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    invariant(lo <= hi, "uniform_int bounds");
    std::uint64_t span = std::uint64_t(hi - lo) + 1;
    if (span == 0) return std::int64_t(next_u64());  // full 64-bit range
    return lo + std::int64_t(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Exponential inter-arrival gap, mean 1/rate.
  double exponential(double rate_per_unit) {
    return -std::log1p(-uniform01()) / rate_per_unit;
  }

 private:
  std::string name_;
  std::uint64_t seed_ = 0;
  std::uint64_t state_ = 0;
};

}  // namespace orchsim

#endif  // ORCHSIM_RNG_HPP
