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

#ifndef ORCHSIM_MATRIC_HPP
#define ORCHSIM_MATRIC_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/access_net.hpp"
#include "orchsim/common.hpp"
#include "orchsim/monitoring.hpp"

namespace orchsim {

enum class EndpointKind { ue, at };

struct EndpointRecord {
  std::string id;
  EndpointKind kind = EndpointKind::ue;
  SimTime registered_at = 0;
  bool authorized = true;
};

struct MobilityConfig {
  double hysteresis = 0.05;
  SimTime min_dwell_us = 100 * kUsPerMs;
};

struct ScoreWeights {
  double w_latency = 0.5;
  double w_capacity = 0.3;
  double w_energy = 0.2;

  void validate() const;
};

/// Telemetry metric kinds collected from every AT.
enum class TelemetryKind { load, committed_bps, power_w, state };

std::string_view telemetry_kind_name(TelemetryKind k);

/// Bounded per-(AT, metric) ring storage of telemetry samples.
class TelemetryDb {
 public:
  explicit TelemetryDb(std::size_t capacity = 1024) : capacity_(capacity) {}

  void append(const std::string& at_id, TelemetryKind kind,
              const MetricSample& sample);

  /// Time-ordered retained samples with t >= since.
  std::vector<MetricSample> query(const std::string& at_id, TelemetryKind kind,
                                  SimTime since) const;

  bool known_at(const std::string& at_id) const;
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::map<std::pair<std::string, int>, std::deque<MetricSample>> buffers_;
};

struct AttachmentPlan {
  std::vector<Attachment> legs;  // 1 or 2, higher-scored first
  double plan_score = 0.0;       // sum of leg scores
};

enum class QosActionType { increase_share, handover_eval, escalate };

struct QosAction {
  QosActionType type = QosActionType::escalate;
  std::string flow;
  std::string at_id;          // increase_share target
  std::int64_t delta_bps = 0; // increase_share amount
};

struct HandoverDecision {
  bool handover = false;
  std::string target;  // set when handover is true
};

/// Per-domain multi-access controller: endpoint registry, telemetry
/// database, AT scoring/selection, QoS enforcement and inter-AT mobility.
class Matric {
 public:
  Matric(std::string domain, AccessNet& net, Broker& broker,
         std::size_t telemetry_capacity = 1024);

  const std::string& domain() const { return domain_; }
  AccessNet& net() { return net_; }
  const AccessNet& net() const { return net_; }

  // --- endpoint registry -------------------------------------------------
  void register_endpoint(const EndpointRecord& rec);
  void deregister_endpoint(const std::string& id);
  std::optional<EndpointRecord> endpoint(const std::string& id) const;

  // --- telemetry ----------------------------------------------------------
  /// Samples load/committed/power/state for one registered AT, appends them
  /// to the telemetry database and publishes them on
  /// "matric.<domain>.<at>.<metric>".
  std::vector<MetricSample> collect_metrics(const std::string& at_id,
                                            SimTime t);

  std::vector<MetricSample> query_telemetry(const std::string& at_id,
                                            TelemetryKind kind,
                                            SimTime since) const;

  /// Topic string for one AT metric pipeline.
  std::string telemetry_topic(const std::string& at_id,
                              TelemetryKind kind) const;

  // --- AT selection -------------------------------------------------------
  /// Composite score in [0,1]:
  ///   w_latency  * (1 - min(base_latency / latency_bound, 1))
  /// + w_capacity * headroom / capacity
  /// - w_energy   * p_max / max_pmax_among_candidates
  /// clamped to [0,1]. Requires an active AT covering the flow's zone.
  double score_at(const AccessTech& at, const Flow& f, const ScoreWeights& w,
                  double max_pmax_w) const;

  /// The additive terms behind score_at ("latency", "capacity", "energy"),
  /// before clamping; the energy term carries its negative sign.
  std::vector<std::pair<std::string, double>> score_terms(
      const AccessTech& at, const Flow& f, const ScoreWeights& w,
      double max_pmax_w) const;

  /// Largest p_max_w among the listed ATs (unknown ids ignored).
  double max_pmax(const std::vector<std::string>& at_ids) const;

  /// Picks the feasible argmax-score AT, or a 2-way split across the best
  /// scoring pair when no single AT has the headroom. Ties break on the
  /// lexicographically smallest AT id.
  AttachmentPlan select_at(const Flow& f,
                           const std::vector<std::string>& candidate_ids,
                           const ScoreWeights& w) const;

  /// Applies a plan: admits every leg and records the attachment time.
  void attach(Flow& f, const AttachmentPlan& plan, SimTime t);

  /// Releases every attachment of f.
  void detach(Flow& f);

  // --- QoS / mobility -----------------------------------------------------
  /// Action ladder on a violated window: grow the current share if the
  /// primary AT has headroom, otherwise ask for a handover evaluation if any
  /// alternative has headroom, otherwise escalate. Compliant windows yield
  /// no actions.
  std::vector<QosAction> enforce_qos(
      const Flow& f, const KpiValues& window_values,
      const std::vector<std::string>& candidate_ids) const;

  /// Handover requires the best alternative to beat the current score by
  /// more than cfg.hysteresis and the flow to have dwelt at least
  /// cfg.min_dwell_us on its current attachment.
  HandoverDecision evaluate_handover(
      const Flow& f, const std::vector<std::string>& candidate_ids,
      const MobilityConfig& cfg, const ScoreWeights& w, SimTime t) const;

  /// Atomic primary-attachment swap; the flow is never observable with zero
  /// or duplicate primary attachments.
  void execute_handover(Flow& f, const std::string& target, SimTime t);

  std::vector<std::string> all_at_ids() const;

 private:
  struct Feasible {
    std::string id;
    double score = 0.0;
    std::int64_t headroom = 0;
  };
  std::vector<Feasible> feasible_candidates(
      const Flow& f, const std::vector<std::string>& candidate_ids,
      const ScoreWeights& w, bool require_headroom) const;
  bool at_feasible_for(const AccessTech& at, const Flow& f) const;

  std::string domain_;
  AccessNet& net_;
  Broker& broker_;
  TelemetryDb telemetry_;
  std::map<std::string, EndpointRecord> endpoints_;
};

}  // namespace orchsim

#endif  // ORCHSIM_MATRIC_HPP
