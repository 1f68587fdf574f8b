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

#include "orchsim/access_net.hpp"

#include <algorithm>
#include <cmath>

namespace orchsim {

std::string_view at_kind_name(AtKind k) {
  switch (k) {
    case AtKind::cellular: return "cellular";
    case AtKind::wifi: return "wifi";
    case AtKind::lifi: return "lifi";
    case AtKind::satellite: return "satellite";
    case AtKind::fibre: return "fibre";
  }
  return "unknown";
}

std::optional<AtKind> at_kind_from_name(std::string_view s) {
  if (s == "cellular") return AtKind::cellular;
  if (s == "wifi") return AtKind::wifi;
  if (s == "lifi") return AtKind::lifi;
  if (s == "satellite") return AtKind::satellite;
  if (s == "fibre") return AtKind::fibre;
  return std::nullopt;
}

void PowerModel::validate(const std::string& context) const {
  require(0.0 <= p_sleep_w && p_sleep_w <= p_idle_w && p_idle_w <= p_max_w,
          Errc::validation_error,
          context + ": power model must satisfy 0 <= sleep <= idle <= max");
}

void AccessTech::validate() const {
  require(!id.empty(), Errc::validation_error, "AT id must not be empty");
  require(capacity_bps > 0, Errc::validation_error,
          "AT " + id + ": capacity_bps must be positive");
  require(base_latency_us >= 0, Errc::validation_error,
          "AT " + id + ": base_latency_us must be non-negative");
  require(jitter_span_us >= 0, Errc::validation_error,
          "AT " + id + ": jitter_span_us must be non-negative");
  require(per_error_rate >= 0.0 && per_error_rate <= 1.0,
          Errc::validation_error,
          "AT " + id + ": per_error_rate must lie in [0,1]");
  require(positioning_cm >= 0.0, Errc::validation_error,
          "AT " + id + ": positioning_cm must be non-negative");
  require(sync_accuracy_us >= 0, Errc::validation_error,
          "AT " + id + ": sync_accuracy_us must be non-negative");
  power.validate("AT " + id);
}

AccessTech at_preset(AtKind kind, std::string id) {
  AccessTech at;
  at.id = std::move(id);
  at.kind = kind;
  switch (kind) {
    case AtKind::cellular:
      at.capacity_bps = 20'000'000'000;
      at.base_latency_us = 1'000;
      at.jitter_span_us = 500;
      at.power = {800.0, 1500.0, 50.0};
      at.positioning_cm = 0.5;
      at.sync_accuracy_us = 1;
      break;
    case AtKind::wifi:
      at.capacity_bps = 10'000'000'000;
      at.base_latency_us = 2'000;
      at.jitter_span_us = 1'000;
      at.power = {10.0, 25.0, 1.0};
      at.positioning_cm = 5.0;
      at.sync_accuracy_us = 10;
      break;
    case AtKind::lifi:
      at.capacity_bps = 100'000'000'000;  // "up to 100 Gbps"
      at.base_latency_us = 500;
      at.jitter_span_us = 100;
      at.power = {15.0, 40.0, 2.0};
      at.positioning_cm = 0.1;
      at.sync_accuracy_us = 1;
      break;
    case AtKind::satellite:
      at.capacity_bps = 1'000'000'000;
      at.base_latency_us = 20'000;  // LEO one-way floor
      at.jitter_span_us = 20'000;   // spans the 20-40 ms band
      at.power = {100.0, 300.0, 10.0};
      at.positioning_cm = 50.0;
      at.sync_accuracy_us = 100;
      break;
    case AtKind::fibre:
      at.capacity_bps = 400'000'000'000;
      at.base_latency_us = 100;
      at.jitter_span_us = 10;
      at.power = {50.0, 150.0, 5.0};
      at.positioning_cm = 0.0;  // wired endpoint, position known
      at.sync_accuracy_us = 0;
      break;
  }
  return at;
}

void AccessNet::add_at(AccessTech at) {
  at.validate();
  require(ats_.count(at.id) == 0, Errc::duplicate_id,
          "AT " + at.id + " already present in domain " + domain_);
  ats_.emplace(at.id, std::move(at));
}

const AccessTech& AccessNet::at(const std::string& id) const {
  auto it = ats_.find(id);
  require(it != ats_.end(), Errc::unknown_at, id);
  return it->second;
}

AccessTech& AccessNet::at_mut(const std::string& id) {
  auto it = ats_.find(id);
  require(it != ats_.end(), Errc::unknown_at, id);
  return it->second;
}

std::int64_t AccessNet::sample_latency(const AccessTech& at,
                                       double load_fraction, RngStream& rng) {
  require(at.state == AtState::active, Errc::at_sleeping, at.id);
  invariant(load_fraction >= 0.0 && load_fraction < 1.0,
            "load_fraction outside [0,1)");
  double factor = std::min(1.0 / (1.0 - load_fraction), 5.0);
  double jitter = at.jitter_span_us > 0
                      ? rng.uniform01() * double(at.jitter_span_us)
                      : 0.0;
  std::int64_t latency =
      std::int64_t(double(at.base_latency_us) * factor + jitter);
  invariant(latency >= at.base_latency_us, "latency below base");
  return latency;
}

double AccessNet::at_power(const AccessTech& at, double load_fraction) {
  if (at.state == AtState::sleeping) return at.power.p_sleep_w;
  double clamped = std::clamp(load_fraction, 0.0, 1.0);
  return at.power.p_idle_w +
         (at.power.p_max_w - at.power.p_idle_w) * clamped;
}

double AccessNet::power_now(const std::string& at_id) const {
  const AccessTech& a = at(at_id);
  return at_power(a, a.load_fraction());
}

void AccessNet::check_conservation(const AccessTech& at) {
  std::int64_t sum = 0;
  for (const auto& [flow, share] : at.shares) sum += share;
  invariant(sum == at.committed_bps, "AT " + at.id + " share sum mismatch");
  invariant(at.committed_bps <= at.capacity_bps,
            "AT " + at.id + " over capacity");
  invariant(at.committed_bps >= 0, "AT " + at.id + " negative commitment");
}

void AccessNet::admit_flow(const std::string& at_id, const Flow& f,
                           std::int64_t share_bps) {
  AccessTech& at = at_mut(at_id);
  require(share_bps > 0, Errc::validation_error,
          "share for flow " + f.id + " must be positive");
  require(at.state == AtState::active, Errc::at_sleeping, at.id);
  require(at.committed_bps + share_bps <= at.capacity_bps,
          Errc::insufficient_capacity,
          "AT " + at.id + " cannot take " + std::to_string(share_bps) + " bps");
  require(at.shares.count(f.id) == 0, Errc::duplicate_id,
          "flow " + f.id + " already attached to " + at.id);
  at.shares[f.id] = share_bps;
  at.committed_bps += share_bps;
  check_conservation(at);
}

void AccessNet::release_flow(const std::string& at_id,
                             const std::string& flow_id) {
  AccessTech& at = at_mut(at_id);
  auto it = at.shares.find(flow_id);
  require(it != at.shares.end(), Errc::not_attached,
          "flow " + flow_id + " not attached to " + at.id);
  at.committed_bps -= it->second;
  at.shares.erase(it);
  check_conservation(at);
}

void AccessNet::set_sleep(const std::string& at_id, bool sleeping) {
  AccessTech& at = at_mut(at_id);
  if (sleeping) {
    require(at.committed_bps == 0, Errc::at_busy,
            "AT " + at.id + " has committed bandwidth");
    at.state = AtState::sleeping;
  } else {
    at.state = AtState::active;
  }
}

std::int64_t AccessNet::total_capacity_bps() const {
  std::int64_t sum = 0;
  for (const auto& [id, at] : ats_) sum += at.capacity_bps;
  return sum;
}

std::int64_t AccessNet::total_committed_bps() const {
  std::int64_t sum = 0;
  for (const auto& [id, at] : ats_) sum += at.committed_bps;
  return sum;
}

}  // namespace orchsim
