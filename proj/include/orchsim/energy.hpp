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

#ifndef ORCHSIM_ENERGY_HPP
#define ORCHSIM_ENERGY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "orchsim/common.hpp"

namespace orchsim {

struct PowerReading {
  SimTime t = 0;
  double watts = 0.0;
};

/// Joule accounting per component plus delivered-bit totals. Power is
/// piecewise-constant between readings, so the rectangle rule is exact.
class EnergyLedger {
 public:
  /// Integrates one component's power over [t0, t1]. Readings must be
  /// time-ordered and the first reading must not be later than t0; the last
  /// reading extends to t1. Returns the joules added.
  double account(const std::string& component, SimTime t0, SimTime t1,
                 const std::vector<PowerReading>& readings);

  void add_delivered_bits(std::int64_t bits) {
    invariant(bits >= 0, "delivered bits must be non-negative");
    delivered_bits_ += bits;
  }

  double joules(const std::string& component) const;
  double total_joules() const;
  std::int64_t delivered_bits() const { return delivered_bits_; }

  /// Delivered bits per consumed joule (bit/J); 0 when nothing consumed.
  double efficiency_bits_per_joule() const;

  const std::map<std::string, double>& by_component() const { return joules_; }

 private:
  std::map<std::string, double> joules_;
  std::int64_t delivered_bits_ = 0;
};

/// Streaming wrapper that turns power-change notifications into ledger
/// entries: each component's power holds constant between notifications.
class PowerIntegrator {
 public:
  explicit PowerIntegrator(EnergyLedger& ledger) : ledger_(ledger) {}

  /// Declares the component's power from time t onward; accumulates the
  /// segment since the previous notification first.
  void set_power(const std::string& component, SimTime t, double watts);

  /// Accumulates every component up to t without changing its power.
  void flush(SimTime t);

 private:
  struct State {
    SimTime since = 0;
    double watts = 0.0;
  };
  EnergyLedger& ledger_;
  std::map<std::string, State> state_;
};

}  // namespace orchsim

#endif  // ORCHSIM_ENERGY_HPP
