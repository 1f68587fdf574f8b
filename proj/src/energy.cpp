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

#include "orchsim/energy.hpp"

namespace orchsim {

double EnergyLedger::account(const std::string& component, SimTime t0,
                             SimTime t1,
                             const std::vector<PowerReading>& readings) {
  require(t1 > t0, Errc::non_monotonic_interval,
          "interval [" + std::to_string(t0) + "," + std::to_string(t1) + "]");
  require(!readings.empty() && readings.front().t <= t0,
          Errc::validation_error,
          "readings must cover the start of the interval");
  double added = 0.0;
  for (std::size_t i = 0; i < readings.size(); ++i) {
    invariant(readings[i].watts >= 0.0, "negative power reading");
    if (i + 1 < readings.size()) {
      invariant(readings[i].t <= readings[i + 1].t,
                "power readings out of order");
    }
    SimTime seg_start = std::max(readings[i].t, t0);
    SimTime seg_end = (i + 1 < readings.size())
                          ? std::min(readings[i + 1].t, t1)
                          : t1;
    if (seg_end > seg_start) {
      added += readings[i].watts *
               (double(seg_end - seg_start) / double(kUsPerSec));
    }
  }
  joules_[component] += added;
  return added;
}

double EnergyLedger::joules(const std::string& component) const {
  auto it = joules_.find(component);
  return it == joules_.end() ? 0.0 : it->second;
}

double EnergyLedger::total_joules() const {
  double sum = 0.0;
  for (const auto& [id, j] : joules_) sum += j;
  return sum;
}

double EnergyLedger::efficiency_bits_per_joule() const {
  double total = total_joules();
  if (total <= 0.0) return 0.0;
  return double(delivered_bits_) / total;
}

void PowerIntegrator::set_power(const std::string& component, SimTime t,
                                double watts) {
  auto it = state_.find(component);
  if (it == state_.end()) {
    state_[component] = {t, watts};
    return;
  }
  State& st = it->second;
  if (t > st.since) {
    ledger_.account(component, st.since, t, {{st.since, st.watts}});
  }
  st.since = t;
  st.watts = watts;
}

void PowerIntegrator::flush(SimTime t) {
  for (auto& [component, st] : state_) {
    if (t > st.since) {
      ledger_.account(component, st.since, t, {{st.since, st.watts}});
      st.since = t;
    }
  }
}

}  // namespace orchsim
