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

#include "orchsim/matric.hpp"

#include <algorithm>
#include <cmath>

namespace orchsim {

void ScoreWeights::validate() const {
  require(w_latency >= 0.0 && w_capacity >= 0.0 && w_energy >= 0.0,
          Errc::validation_error, "score weights must be non-negative");
  require(std::fabs(w_latency + w_capacity + w_energy - 1.0) <= 1e-9,
          Errc::validation_error, "score weights must sum to 1");
}

std::string_view telemetry_kind_name(TelemetryKind k) {
  switch (k) {
    case TelemetryKind::load: return "load";
    case TelemetryKind::committed_bps: return "committed_bps";
    case TelemetryKind::power_w: return "power_w";
    case TelemetryKind::state: return "state";
  }
  return "unknown";
}

void TelemetryDb::append(const std::string& at_id, TelemetryKind kind,
                         const MetricSample& sample) {
  auto& buf = buffers_[{at_id, int(kind)}];
  invariant(buf.empty() || buf.back().t <= sample.t,
            "telemetry samples must arrive in time order");
  buf.push_back(sample);
  while (buf.size() > capacity_) buf.pop_front();
}

std::vector<MetricSample> TelemetryDb::query(const std::string& at_id,
                                             TelemetryKind kind,
                                             SimTime since) const {
  std::vector<MetricSample> out;
  auto it = buffers_.find({at_id, int(kind)});
  if (it == buffers_.end()) return out;
  for (const MetricSample& s : it->second) {
    if (s.t >= since) out.push_back(s);
  }
  return out;
}

bool TelemetryDb::known_at(const std::string& at_id) const {
  for (const auto& [key, buf] : buffers_) {
    if (key.first == at_id) return true;
  }
  return false;
}

Matric::Matric(std::string domain, AccessNet& net, Broker& broker,
               std::size_t telemetry_capacity)
    : domain_(std::move(domain)),
      net_(net),
      broker_(broker),
      telemetry_(telemetry_capacity) {}

void Matric::register_endpoint(const EndpointRecord& rec) {
  require(endpoints_.count(rec.id) == 0, Errc::duplicate_id,
          "endpoint " + rec.id + " already registered in " + domain_);
  endpoints_.emplace(rec.id, rec);
  if (rec.kind == EndpointKind::at) {
    for (TelemetryKind k :
         {TelemetryKind::load, TelemetryKind::committed_bps,
          TelemetryKind::power_w, TelemetryKind::state}) {
      std::string topic = telemetry_topic(rec.id, k);
      if (!broker_.advertised(topic)) {
        MetricUnit unit = (k == TelemetryKind::load) ? MetricUnit::fraction
                          : (k == TelemetryKind::committed_bps)
                              ? MetricUnit::bps
                          : (k == TelemetryKind::power_w) ? MetricUnit::watts
                                                          : MetricUnit::boolean;
        broker_.advertise({topic, "matric." + domain_, unit});
      }
    }
  }
}

void Matric::deregister_endpoint(const std::string& id) {
  auto it = endpoints_.find(id);
  require(it != endpoints_.end(), Errc::unknown_at,
          "endpoint " + id + " not registered");
  endpoints_.erase(it);
}

std::optional<EndpointRecord> Matric::endpoint(const std::string& id) const {
  auto it = endpoints_.find(id);
  if (it == endpoints_.end()) return std::nullopt;
  return it->second;
}

std::string Matric::telemetry_topic(const std::string& at_id,
                                    TelemetryKind kind) const {
  return "matric." + domain_ + "." + at_id + "." +
         std::string(telemetry_kind_name(kind));
}

std::vector<MetricSample> Matric::collect_metrics(const std::string& at_id,
                                                  SimTime t) {
  auto ep = endpoint(at_id);
  require(ep.has_value() && ep->kind == EndpointKind::at, Errc::unknown_at,
          at_id + " is not a registered AT in " + domain_);
  const AccessTech& at = net_.at(at_id);

  std::vector<MetricSample> out;
  auto emit = [&](TelemetryKind k, double value, MetricUnit unit) {
    MetricSample s{t, telemetry_topic(at_id, k), value, unit};
    telemetry_.append(at_id, k, s);
    broker_.publish(s);
    out.push_back(s);
  };
  emit(TelemetryKind::load, at.load_fraction(), MetricUnit::fraction);
  emit(TelemetryKind::committed_bps, double(at.committed_bps), MetricUnit::bps);
  emit(TelemetryKind::power_w, AccessNet::at_power(at, at.load_fraction()),
       MetricUnit::watts);
  emit(TelemetryKind::state, at.state == AtState::active ? 1.0 : 0.0,
       MetricUnit::boolean);
  return out;
}

std::vector<MetricSample> Matric::query_telemetry(const std::string& at_id,
                                                  TelemetryKind kind,
                                                  SimTime since) const {
  auto ep = endpoint(at_id);
  require((ep.has_value() && ep->kind == EndpointKind::at) ||
              telemetry_.known_at(at_id),
          Errc::unknown_at, at_id);
  return telemetry_.query(at_id, kind, since);
}

std::vector<std::pair<std::string, double>> Matric::score_terms(
    const AccessTech& at, const Flow& f, const ScoreWeights& w,
    double max_pmax_w) const {
  double latency_term =
      1.0 - std::min(double(at.base_latency_us) /
                         double(f.kpi.latency_bound_us),
                     1.0);
  double capacity_term = double(at.headroom_bps()) / double(at.capacity_bps);
  double energy_term =
      max_pmax_w > 0.0 ? at.power.p_max_w / max_pmax_w : 0.0;
  return {{"latency", w.w_latency * latency_term},
          {"capacity", w.w_capacity * capacity_term},
          {"energy", -w.w_energy * energy_term}};
}

double Matric::max_pmax(const std::vector<std::string>& at_ids) const {
  double max_pmax_w = 0.0;
  for (const std::string& id : at_ids) {
    if (net_.has_at(id)) {
      max_pmax_w = std::max(max_pmax_w, net_.at(id).power.p_max_w);
    }
  }
  return max_pmax_w;
}

double Matric::score_at(const AccessTech& at, const Flow& f,
                        const ScoreWeights& w, double max_pmax_w) const {
  require(at.state == AtState::active, Errc::at_sleeping, at.id);
  require(at.covers(f.zone), Errc::no_coverage,
          "AT " + at.id + " does not cover zone " + f.zone);
  double score = 0.0;
  for (const auto& [name, value] : score_terms(at, f, w, max_pmax_w)) {
    score += value;
  }
  return std::clamp(score, 0.0, 1.0);
}

bool Matric::at_feasible_for(const AccessTech& at, const Flow& f) const {
  if (at.state != AtState::active) return false;
  if (!at.covers(f.zone)) return false;
  if (at.base_latency_us > f.kpi.latency_bound_us) return false;
  if (f.kpi.positioning_cm && !(at.positioning_cm < *f.kpi.positioning_cm))
    return false;
  if (f.kpi.sync_bound_us && !(at.sync_accuracy_us < *f.kpi.sync_bound_us))
    return false;
  return true;
}

std::vector<Matric::Feasible> Matric::feasible_candidates(
    const Flow& f, const std::vector<std::string>& candidate_ids,
    const ScoreWeights& w, bool require_headroom) const {
  double max_pmax_w = max_pmax(candidate_ids);
  std::vector<Feasible> out;
  for (const std::string& id : candidate_ids) {
    if (!net_.has_at(id)) continue;
    const AccessTech& at = net_.at(id);
    if (!at_feasible_for(at, f)) continue;
    if (require_headroom && at.headroom_bps() <= 0) continue;
    out.push_back(Feasible{id, score_at(at, f, w, max_pmax_w),
                           at.headroom_bps()});
  }
  // Deterministic order: score descending, then id ascending.
  std::sort(out.begin(), out.end(), [](const Feasible& a, const Feasible& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  return out;
}

AttachmentPlan Matric::select_at(const Flow& f,
                                 const std::vector<std::string>& candidate_ids,
                                 const ScoreWeights& w) const {
  require(!candidate_ids.empty(), Errc::no_feasible_at,
          "no candidates for flow " + f.id);
  w.validate();
  std::vector<Feasible> feasible =
      feasible_candidates(f, candidate_ids, w, /*require_headroom=*/true);

  // Single attachment: feasible argmax score with full headroom.
  for (const Feasible& c : feasible) {
    if (c.headroom >= f.demand_bps) {
      return AttachmentPlan{{Attachment{c.id, f.demand_bps}}, c.score};
    }
  }

  // 2-way split: best score-sum pair whose combined headroom covers demand.
  // Within a pair the higher-scored AT is filled first; sum ties break on
  // the lexicographically smallest (first id, second id) sequence.
  const Feasible* best_a = nullptr;
  const Feasible* best_b = nullptr;
  double best_sum = 0.0;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    for (std::size_t j = i + 1; j < feasible.size(); ++j) {
      if (feasible[i].headroom + feasible[j].headroom < f.demand_bps) continue;
      double sum = feasible[i].score + feasible[j].score;
      bool better = !best_a || sum > best_sum;
      if (!better && best_a && sum == best_sum) {
        auto key = std::make_pair(feasible[i].id, feasible[j].id);
        better = key < std::make_pair(best_a->id, best_b->id);
      }
      if (better) {
        best_a = &feasible[i];
        best_b = &feasible[j];
        best_sum = sum;
      }
    }
  }
  require(best_a != nullptr, Errc::no_feasible_at,
          "flow " + f.id + ": no single AT or 2-way split can carry " +
              std::to_string(f.demand_bps) + " bps");

  std::int64_t first_share = std::min(best_a->headroom, f.demand_bps);
  std::int64_t second_share = f.demand_bps - first_share;
  invariant(second_share > 0 && second_share <= best_b->headroom,
            "split fill rule produced an infeasible share");
  return AttachmentPlan{
      {Attachment{best_a->id, first_share}, Attachment{best_b->id, second_share}},
      best_sum};
}

void Matric::attach(Flow& f, const AttachmentPlan& plan, SimTime t) {
  invariant(!f.admitted(), "flow " + f.id + " is already attached");
  invariant(plan.legs.size() >= 1 && plan.legs.size() <= 2,
            "attachment plan must have 1 or 2 legs");
  for (const Attachment& leg : plan.legs) {
    net_.admit_flow(leg.at_id, f, leg.share_bps);
  }
  f.attachments = plan.legs;
  f.attached_since_us = t;
}

void Matric::detach(Flow& f) {
  require(f.admitted(), Errc::not_attached, f.id);
  for (const Attachment& leg : f.attachments) {
    net_.release_flow(leg.at_id, f.id);
  }
  f.attachments.clear();
}

std::vector<QosAction> Matric::enforce_qos(
    const Flow& f, const KpiValues& window_values,
    const std::vector<std::string>& candidate_ids) const {
  require(f.admitted(), Errc::not_attached, f.id);
  ComplianceReport report =
      evaluate_sla(f.id, f.kpi, window_values, /*fail_missing=*/true);
  if (report.compliant) return {};

  const Attachment& primary = f.attachments.front();
  std::int64_t primary_headroom = net_.at(primary.at_id).headroom_bps();
  if (primary_headroom > 0) {
    std::int64_t deficit = std::max<std::int64_t>(f.demand_bps / 10, 1);
    if (window_values.throughput_bps &&
        *window_values.throughput_bps < double(f.kpi.throughput_dl_bps)) {
      deficit = std::max<std::int64_t>(
          deficit, std::int64_t(double(f.kpi.throughput_dl_bps) -
                                *window_values.throughput_bps));
    }
    return {QosAction{QosActionType::increase_share, f.id, primary.at_id,
                      std::min(primary_headroom, deficit)}};
  }

  for (const std::string& id : candidate_ids) {
    if (id == primary.at_id || !net_.has_at(id)) continue;
    const AccessTech& at = net_.at(id);
    if (at.state == AtState::active && at.headroom_bps() > 0) {
      return {QosAction{QosActionType::handover_eval, f.id, "", 0}};
    }
  }
  return {QosAction{QosActionType::escalate, f.id, "", 0}};
}

HandoverDecision Matric::evaluate_handover(
    const Flow& f, const std::vector<std::string>& candidate_ids,
    const MobilityConfig& cfg, const ScoreWeights& w, SimTime t) const {
  require(f.admitted(), Errc::not_attached, f.id);
  invariant(t >= f.attached_since_us, "handover evaluated before attachment");

  const Attachment& primary = f.attachments.front();
  std::vector<std::string> scored = candidate_ids;
  if (std::find(scored.begin(), scored.end(), primary.at_id) == scored.end()) {
    scored.push_back(primary.at_id);
  }
  double max_pmax_w = max_pmax(scored);
  double current = score_at(net_.at(primary.at_id), f, w, max_pmax_w);

  HandoverDecision best;
  double best_score = 0.0;
  for (const std::string& id : scored) {
    if (id == primary.at_id || !net_.has_at(id)) continue;
    const AccessTech& at = net_.at(id);
    if (!at_feasible_for(at, f)) continue;
    if (at.headroom_bps() < primary.share_bps) continue;
    double s = score_at(at, f, w, max_pmax_w);
    if (!best.handover || s > best_score ||
        (s == best_score && id < best.target)) {
      best.handover = true;
      best.target = id;
      best_score = s;
    }
  }
  if (!best.handover) return {};
  if (!(best_score > current + cfg.hysteresis)) return {};
  if (t - f.attached_since_us < cfg.min_dwell_us) return {};
  return best;
}

void Matric::execute_handover(Flow& f, const std::string& target, SimTime t) {
  require(f.admitted(), Errc::not_attached, f.id);
  Attachment& primary = f.attachments.front();
  require(target != primary.at_id, Errc::validation_error,
          "handover target equals current AT");
  const AccessTech& tgt = net_.at(target);
  require(tgt.state == AtState::active, Errc::at_sleeping, target);
  require(tgt.headroom_bps() >= primary.share_bps,
          Errc::insufficient_capacity, target);

  // Swap within a single event: release then admit cannot fail after the
  // headroom check, so exactly one primary attachment is ever observable.
  std::string old_at = primary.at_id;
  std::int64_t share = primary.share_bps;
  net_.release_flow(old_at, f.id);
  net_.admit_flow(target, f, share);
  primary.at_id = target;
  f.attached_since_us = t;
}

std::vector<std::string> Matric::all_at_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, at] : net_.ats()) ids.push_back(id);
  return ids;
}

}  // namespace orchsim
