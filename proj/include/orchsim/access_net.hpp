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

#ifndef ORCHSIM_ACCESS_NET_HPP
#define ORCHSIM_ACCESS_NET_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "orchsim/common.hpp"
#include "orchsim/kpi.hpp"
#include "orchsim/rng.hpp"

namespace orchsim {

enum class AtKind { cellular, wifi, lifi, satellite, fibre };
enum class AtState { active, sleeping };

std::string_view at_kind_name(AtKind k);
std::optional<AtKind> at_kind_from_name(std::string_view s);

struct PowerModel {
  double p_idle_w = 0.0;
  double p_max_w = 0.0;
  double p_sleep_w = 0.0;

  void validate(const std::string& context) const;
};

/// One access technology instance: capacity, latency/jitter model, loss
/// probability, coverage, power model and switch-off state.
struct AccessTech {
  std::string id;
  AtKind kind = AtKind::cellular;
  std::int64_t capacity_bps = 0;
  std::int64_t base_latency_us = 0;
  std::int64_t jitter_span_us = 0;
  double per_error_rate = 0.0;
  std::set<std::string> coverage;
  PowerModel power;
  double positioning_cm = 1.0;     // static accuracy attribute
  std::int64_t sync_accuracy_us = 1000;  // static sync capability
  AtState state = AtState::active;

  // Bookkeeping maintained by AccessNet.
  std::int64_t committed_bps = 0;
  std::map<std::string, std::int64_t> shares;  // flow id -> allocated bps

  std::int64_t headroom_bps() const { return capacity_bps - committed_bps; }
  double load_fraction() const {
    return capacity_bps > 0 ? double(committed_bps) / double(capacity_bps) : 0.0;
  }
  bool covers(const std::string& zone) const { return coverage.count(zone) > 0; }

  void validate() const;
};

struct Attachment {
  std::string at_id;
  std::int64_t share_bps = 0;
};

/// A user flow. When admitted, the attachment shares sum exactly to
/// demand_bps; at most two attachments (2-way multi-connectivity).
struct Flow {
  std::string id;
  std::string ue;
  std::string zone;
  std::int64_t demand_bps = 0;
  KpiRequirementSet kpi;
  std::vector<Attachment> attachments;
  SimTime attached_since_us = 0;

  bool admitted() const { return !attachments.empty(); }
};

/// One sampled delivery observation for a flow over its attachments.
struct LinkSample {
  SimTime t = 0;
  std::string flow;
  std::int64_t latency_us = 0;
  std::int64_t delivered_bits = 0;
  bool lost = false;
};

/// Built-in technology presets; every field is scenario-overridable.
AccessTech at_preset(AtKind kind, std::string id);

/// The access side of one domain's infrastructure plane.
class AccessNet {
 public:
  explicit AccessNet(std::string domain) : domain_(std::move(domain)) {}

  const std::string& domain() const { return domain_; }

  void add_at(AccessTech at);
  bool has_at(const std::string& id) const { return ats_.count(id) > 0; }
  const AccessTech& at(const std::string& id) const;
  const std::map<std::string, AccessTech>& ats() const { return ats_; }

  /// Queueing-flavoured latency draw: base * min(1/(1-load), 5) plus a
  /// uniform jitter term on [0, jitter_span). Requires an active AT.
  static std::int64_t sample_latency(const AccessTech& at,
                                     double load_fraction, RngStream& rng);

  static bool sample_loss(const AccessTech& at, RngStream& rng) {
    return rng.bernoulli(at.per_error_rate);
  }

  /// Instantaneous draw for the given utilisation; sleeping ATs report
  /// p_sleep_w regardless of load.
  static double at_power(const AccessTech& at, double load_fraction);

  double power_now(const std::string& at_id) const;

  /// Reserves share_bps of at's capacity for flow f. Rejection leaves the
  /// AT untouched.
  void admit_flow(const std::string& at_id, const Flow& f,
                  std::int64_t share_bps);

  void release_flow(const std::string& at_id, const std::string& flow_id);

  /// Sleep requires zero committed bandwidth (AtBusy otherwise).
  void set_sleep(const std::string& at_id, bool sleeping);

  std::int64_t total_capacity_bps() const;
  std::int64_t total_committed_bps() const;

 private:
  AccessTech& at_mut(const std::string& id);
  static void check_conservation(const AccessTech& at);

  std::string domain_;
  std::map<std::string, AccessTech> ats_;
};

}  // namespace orchsim

#endif  // ORCHSIM_ACCESS_NET_HPP
