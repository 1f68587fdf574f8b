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

#ifndef ORCHSIM_RUNNER_HPP
#define ORCHSIM_RUNNER_HPP

#include <cstdint>
#include <string>

#include "orchsim/common.hpp"
#include "orchsim/scenario.hpp"

namespace orchsim {

/// Everything a run emits. The text artifacts are byte-stable for a fixed
/// (scenario, seed) pair.
struct RunReport {
  std::string report_csv;   // sla_id,kpi,measured,bound,pass
  std::string energy_csv;   // component,joules plus totals
  std::string summary_json;
  std::string trace_text;

  // Headline metrics, duplicated from the summary for direct assertions.
  std::size_t events_delivered = 0;
  std::size_t flows_total = 0;
  std::size_t flows_admitted = 0;
  std::size_t admission_failures = 0;
  std::size_t window_violations = 0;
  std::size_t handovers = 0;
  std::size_t escalations = 0;
  SimTime first_violation_us = -1;  // -1 when the run stayed compliant
  double total_joules = 0.0;
  std::int64_t delivered_bits = 0;
};

RunReport run(const Scenario& scenario);

/// Writes report.csv, energy.csv, summary.json and trace.txt under dir
/// (created if missing).
void write_outputs(const RunReport& report, const std::string& dir);

}  // namespace orchsim

#endif  // ORCHSIM_RUNNER_HPP
