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

#ifndef ORCHSIM_MONITORING_HPP
#define ORCHSIM_MONITORING_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/access_net.hpp"
#include "orchsim/common.hpp"
#include "orchsim/kpi.hpp"

namespace orchsim {

enum class MetricUnit { us, bps, watts, boolean, fraction };

std::string_view metric_unit_name(MetricUnit u);

struct MetricSample {
  SimTime t = 0;
  std::string topic;
  double value = 0.0;
  MetricUnit unit = MetricUnit::fraction;
};

struct PipelineAd {
  std::string topic;
  std::string producer;
  MetricUnit schema = MetricUnit::fraction;
};

/// Advertise/subscribe broker for the monitoring plane. Delivery is
/// synchronous and in publish order; a subscriber sees every sample
/// published after its subscription.
class Broker {
 public:
  using Callback = std::function<void(const MetricSample&)>;

  void advertise(PipelineAd ad);
  bool advertised(const std::string& topic) const {
    return ads_.count(topic) > 0;
  }
  const PipelineAd& ad(const std::string& topic) const;

  void subscribe(const std::string& topic, std::string consumer, Callback cb);

  /// Samples must carry the unit declared by the topic's advertisement.
  void publish(const MetricSample& sample);

  std::size_t published_count() const { return published_; }

 private:
  struct Subscriber {
    std::string consumer;
    Callback cb;
  };
  std::map<std::string, PipelineAd> ads_;
  std::map<std::string, std::vector<Subscriber>> subs_;
  std::size_t published_ = 0;
};

enum class KpiKind { latency_pxx, jitter, throughput, reliability };

/// Fixed-span evaluation window over a flow's link samples; samples lie in
/// [t_end - span, t_end].
struct KpiWindow {
  std::string flow;
  SimTime span_us = kUsPerSec;
  std::vector<LinkSample> samples;
};

/// Nearest-rank percentile: value at 1-based sorted index ceil(p*n).
std::int64_t nearest_rank(std::vector<std::int64_t> values, double p);

/// latency_pxx: nearest-rank percentile of latencies at `percentile`.
/// jitter: p99 of absolute deviations from the median (nearest-rank p50).
/// throughput: delivered bits divided by the window span.
/// reliability: 1 - lost/n.
double compute_kpi(const KpiWindow& w, KpiKind kind, double percentile = 0.99);

/// Per-KPI measurements extracted from one window. Unset optionals mean the
/// window carried no data for that estimator.
struct KpiValues {
  std::optional<double> latency_us;
  std::optional<double> jitter_us;
  std::optional<double> throughput_bps;
  std::optional<double> reliability;
};

KpiValues measure_window(const KpiWindow& w, double percentile);

struct ComplianceItem {
  std::string kpi;      // "latency_p99", "jitter", "throughput", "reliability"
  double measured = 0.0;
  bool measured_valid = true;
  double bound = 0.0;
  bool pass = false;
};

struct ComplianceReport {
  std::string sla_id;
  std::vector<ComplianceItem> items;
  bool compliant = true;
};

/// Compares measurements against the requirement set: latency/jitter pass at
/// <= bound, throughput/reliability at >= bound (bounds inclusive). Throws
/// MissingKpi when a required measurement is absent unless
/// `fail_missing` is set, in which case absent KPIs fail the report.
ComplianceReport evaluate_sla(const std::string& sla_id,
                              const KpiRequirementSet& req,
                              const KpiValues& values,
                              bool fail_missing = false);

std::string percentile_label(double p);

}  // namespace orchsim

#endif  // ORCHSIM_MONITORING_HPP
