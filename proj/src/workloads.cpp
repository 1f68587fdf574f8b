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

#include "orchsim/workloads.hpp"

#include <algorithm>
#include <cmath>

namespace orchsim {

bool KpiOverride::any() const {
  return latency_bound_us || latency_percentile || jitter_bound_us ||
         throughput_dl_bps || throughput_ul_bps || reliability_min ||
         positioning_cm || sync_bound_us;
}

void KpiOverride::apply(KpiRequirementSet& kpi) const {
  if (latency_bound_us) kpi.latency_bound_us = *latency_bound_us;
  if (latency_percentile) kpi.latency_percentile = *latency_percentile;
  if (jitter_bound_us) kpi.jitter_bound_us = *jitter_bound_us;
  if (throughput_dl_bps) kpi.throughput_dl_bps = *throughput_dl_bps;
  if (throughput_ul_bps) kpi.throughput_ul_bps = *throughput_ul_bps;
  if (reliability_min) kpi.reliability_min = *reliability_min;
  if (positioning_cm) kpi.positioning_cm = *positioning_cm;
  if (sync_bound_us) kpi.sync_bound_us = *sync_bound_us;
}

void UseCaseSpec::validate() const {
  require(!name.empty(), Errc::validation_error, "workload name must be set");
  require(user_count >= 1, Errc::validation_error,
          "workload " + name + ": user_count must be at least 1");
  require(area_m2 > 0.0, Errc::validation_error,
          "workload " + name + ": area_m2 must be positive");
  require(duration_s > 0.0, Errc::validation_error,
          "workload " + name + ": duration_s must be positive");
  require(start_s >= 0.0, Errc::validation_error,
          "workload " + name + ": start_s must be non-negative");
  require(!zone.empty(), Errc::validation_error,
          "workload " + name + ": zone must be set");
  if (arrival.kind == ArrivalKind::poisson) {
    require(arrival.rate_per_s > 0.0, Errc::validation_error,
            "workload " + name + ": poisson rate must be positive");
  }
  if (kind == UseCaseKind::virtual_production) {
    require(interaction_class.has_value(), Errc::validation_error,
            "workload " + name + ": virtual_production needs an interaction_class");
  }
}

namespace {

TaskIntent intent_of(const UseCaseSpec& spec) {
  TaskIntent i;
  i.kind = spec.kind;
  i.user_count = spec.user_count;
  i.area_m2 = spec.area_m2;
  i.zone = spec.zone;
  i.interaction_class = spec.interaction_class;
  i.validate();
  return i;
}

KpiRequirementSet preset_with_override(const UseCaseSpec& spec) {
  KpiRequirementSet kpi = translate_intent(intent_of(spec));
  if (spec.kpi_override) spec.kpi_override->apply(kpi);
  kpi.validate("workload " + spec.name);
  return kpi;
}

SimTime arrival_offset(const UseCaseSpec& spec, std::int64_t user_index,
                       double& poisson_cursor_s, RngStream& rng) {
  if (spec.arrival.kind == ArrivalKind::all_at_start) return 0;
  (void)user_index;
  poisson_cursor_s += rng.exponential(spec.arrival.rate_per_s);
  double clipped = std::min(poisson_cursor_s, spec.duration_s);
  return SimTime(std::llround(clipped * double(kUsPerSec)));
}

void check_density(const UseCaseSpec& spec, double lo, double hi,
                   std::vector<std::string>& warnings) {
  double density = double(spec.user_count) / spec.area_m2;
  if (density < lo || density > hi) {
    warnings.push_back("workload " + spec.name + ": density " +
                       fmt_double(density) + "/m2 outside the " +
                       fmt_double(lo) + "-" + fmt_double(hi) +
                       "/m2 band for " +
                       std::string(use_case_name(spec.kind)));
  }
}

SimTime workload_release_us(const UseCaseSpec& spec) {
  return SimTime(std::llround(spec.duration_s * double(kUsPerSec)));
}

}  // namespace

GeneratedWorkload gen_metaverse(const UseCaseSpec& spec, RngStream& rng) {
  require(spec.kind == UseCaseKind::metaverse, Errc::kind_mismatch,
          "gen_metaverse on " + std::string(use_case_name(spec.kind)));
  spec.validate();

  GeneratedWorkload out;
  out.intent = intent_of(spec);
  check_density(spec, 10.0, 100.0, out.warnings);
  KpiRequirementSet kpi = preset_with_override(spec);

  // The areal load implied by per-user rates can exceed the cited
  // network-capacity band; that is flagged, not rejected.
  double per_user_gbps =
      spec.kpi_override && spec.kpi_override->throughput_dl_bps
          ? double(kpi.peak_throughput_bps()) / 1e9
          : 100.0;  // top of the per-user band
  double tbps_per_km2 = per_user_gbps *
                        (double(spec.user_count) / spec.area_m2) * 1000.0;
  if (tbps_per_km2 > 100.0) {
    out.warnings.push_back(
        "workload " + spec.name + ": worst-case areal load " +
        fmt_double(tbps_per_km2) + " Tbps/km2 exceeds the 1-100 band");
  }

  double poisson_cursor = 0.0;
  for (std::int64_t u = 0; u < spec.user_count; ++u) {
    FlowTemplate f;
    f.id = spec.name + ".f" + std::to_string(u);
    f.ue = spec.name + ".u" + std::to_string(u);
    f.zone = spec.zone;
    f.kpi = kpi;
    f.demand_bps =
        spec.kpi_override && spec.kpi_override->throughput_dl_bps
            ? kpi.peak_throughput_bps()
            : rng.uniform_int(5'000'000'000, 100'000'000'000);
    f.arrival_us = arrival_offset(spec, u, poisson_cursor, rng);
    f.release_us = workload_release_us(spec);
    out.flows.push_back(std::move(f));
  }
  return out;
}

GeneratedWorkload gen_virtual_production(const UseCaseSpec& spec,
                                         RngStream& rng) {
  require(spec.kind == UseCaseKind::virtual_production, Errc::kind_mismatch,
          "gen_virtual_production on " + std::string(use_case_name(spec.kind)));
  spec.validate();

  GeneratedWorkload out;
  out.intent = intent_of(spec);
  KpiRequirementSet class_kpi = preset_with_override(spec);

  auto stream_flow = [&](std::int64_t user, const std::string& label,
                         std::int64_t rate_bps) {
    FlowTemplate f;
    f.id = spec.name + ".u" + std::to_string(user) + "." + label;
    f.ue = spec.name + ".u" + std::to_string(user);
    f.zone = spec.zone;
    f.kpi = class_kpi;
    f.kpi.throughput_dl_bps = rate_bps;
    f.kpi.throughput_ul_bps = rate_bps;
    f.demand_bps = rate_bps;
    f.release_us = workload_release_us(spec);
    return f;
  };

  double poisson_cursor = 0.0;
  for (std::int64_t u = 0; u < spec.user_count; ++u) {
    SimTime at = arrival_offset(spec, u, poisson_cursor, rng);
    FlowTemplate uhd =
        stream_flow(u, "uhd", rng.uniform_int(20'000'000, 50'000'000));
    FlowTemplate audio =
        stream_flow(u, "audio", rng.uniform_int(48'000, 3'000'000));
    FlowTemplate anc = stream_flow(u, "anc", 64'000);
    uhd.arrival_us = audio.arrival_us = anc.arrival_us = at;
    out.flows.push_back(std::move(uhd));
    out.flows.push_back(std::move(audio));
    out.flows.push_back(std::move(anc));
  }

  // Shared production trunk towards the edge/cloud leg.
  FlowTemplate trunk;
  trunk.id = spec.name + ".trunk";
  trunk.ue = spec.name + ".edge";
  trunk.zone = spec.zone;
  trunk.demand_bps = 10'000'000'000;
  trunk.kpi = class_kpi;
  trunk.kpi.latency_bound_us = 50 * kUsPerMs;
  trunk.kpi.jitter_bound_us = 10 * kUsPerMs;
  trunk.kpi.throughput_dl_bps = 10'000'000'000;
  trunk.kpi.throughput_ul_bps = 10'000'000'000;
  trunk.arrival_us = 0;
  trunk.release_us = workload_release_us(spec);
  out.flows.push_back(std::move(trunk));
  return out;
}

GeneratedWorkload gen_digital_twin(const UseCaseSpec& spec, RngStream& rng) {
  require(spec.kind == UseCaseKind::digital_twin, Errc::kind_mismatch,
          "gen_digital_twin on " + std::string(use_case_name(spec.kind)));
  spec.validate();

  GeneratedWorkload out;
  out.intent = intent_of(spec);
  check_density(spec, 1.0, 100.0, out.warnings);
  KpiRequirementSet kpi = preset_with_override(spec);

  double poisson_cursor = 0.0;
  for (std::int64_t u = 0; u < spec.user_count; ++u) {
    FlowTemplate f;
    f.id = spec.name + ".f" + std::to_string(u);
    f.ue = spec.name + ".u" + std::to_string(u);
    f.zone = spec.zone;
    f.kpi = kpi;
    std::int64_t dl = rng.uniform_int(100'000'000, 10'000'000'000);
    std::int64_t ul = rng.uniform_int(50'000'000, 5'000'000'000);
    if (spec.kpi_override && spec.kpi_override->throughput_dl_bps) {
      dl = kpi.throughput_dl_bps;
      ul = kpi.throughput_ul_bps;
    }
    f.demand_bps = std::max(dl, ul);
    f.arrival_us = arrival_offset(spec, u, poisson_cursor, rng);
    f.release_us = workload_release_us(spec);
    out.flows.push_back(std::move(f));
  }
  return out;
}

GeneratedWorkload gen_factory(const UseCaseSpec& spec, RngStream& rng) {
  require(spec.kind == UseCaseKind::factory_dt ||
              spec.kind == UseCaseKind::factory_robotics,
          Errc::kind_mismatch,
          "gen_factory on " + std::string(use_case_name(spec.kind)));
  spec.validate();

  GeneratedWorkload out;
  out.intent = intent_of(spec);
  KpiRequirementSet kpi = preset_with_override(spec);

  double poisson_cursor = 0.0;
  for (std::int64_t u = 0; u < spec.user_count; ++u) {
    FlowTemplate f;
    f.id = spec.name + ".f" + std::to_string(u);
    f.ue = spec.name + ".u" + std::to_string(u);
    f.zone = spec.zone;
    f.kpi = kpi;
    f.demand_bps = kpi.peak_throughput_bps();
    f.arrival_us = arrival_offset(spec, u, poisson_cursor, rng);
    f.release_us = workload_release_us(spec);
    out.flows.push_back(std::move(f));
  }
  return out;
}

GeneratedWorkload generate_workload(const UseCaseSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case UseCaseKind::metaverse: return gen_metaverse(spec, rng);
    case UseCaseKind::digital_twin: return gen_digital_twin(spec, rng);
    case UseCaseKind::virtual_production:
      return gen_virtual_production(spec, rng);
    case UseCaseKind::factory_dt:
    case UseCaseKind::factory_robotics: return gen_factory(spec, rng);
  }
  fail(Errc::unknown_use_case, "unrecognised workload kind");
}

}  // namespace orchsim
