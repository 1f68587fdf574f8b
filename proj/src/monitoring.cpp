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

#include "orchsim/monitoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace orchsim {

std::string_view metric_unit_name(MetricUnit u) {
  switch (u) {
    case MetricUnit::us: return "us";
    case MetricUnit::bps: return "bps";
    case MetricUnit::watts: return "watts";
    case MetricUnit::boolean: return "bool";
    case MetricUnit::fraction: return "fraction";
  }
  return "unknown";
}

void Broker::advertise(PipelineAd ad) {
  require(ads_.count(ad.topic) == 0, Errc::duplicate_topic, ad.topic);
  ads_.emplace(ad.topic, std::move(ad));
}

const PipelineAd& Broker::ad(const std::string& topic) const {
  auto it = ads_.find(topic);
  require(it != ads_.end(), Errc::unknown_topic, topic);
  return it->second;
}

void Broker::subscribe(const std::string& topic, std::string consumer,
                       Callback cb) {
  require(ads_.count(topic) > 0, Errc::unknown_topic, topic);
  subs_[topic].push_back(Subscriber{std::move(consumer), std::move(cb)});
}

void Broker::publish(const MetricSample& sample) {
  auto ad_it = ads_.find(sample.topic);
  require(ad_it != ads_.end(), Errc::unknown_topic, sample.topic);
  invariant(ad_it->second.schema == sample.unit,
            "sample unit does not match schema of " + sample.topic);
  ++published_;
  auto it = subs_.find(sample.topic);
  if (it == subs_.end()) return;
  for (Subscriber& s : it->second) s.cb(sample);
}

std::int64_t nearest_rank(std::vector<std::int64_t> values, double p) {
  require(!values.empty(), Errc::empty_window, "percentile of empty window");
  invariant(p > 0.0 && p <= 1.0, "percentile outside (0,1]");
  std::sort(values.begin(), values.end());
  std::size_t idx = std::size_t(std::ceil(p * double(values.size())));
  if (idx == 0) idx = 1;
  if (idx > values.size()) idx = values.size();
  return values[idx - 1];
}

double compute_kpi(const KpiWindow& w, KpiKind kind, double percentile) {
  require(!w.samples.empty(), Errc::empty_window, "window for " + w.flow);
  switch (kind) {
    case KpiKind::latency_pxx: {
      std::vector<std::int64_t> lat;
      lat.reserve(w.samples.size());
      for (const LinkSample& s : w.samples) lat.push_back(s.latency_us);
      return double(nearest_rank(std::move(lat), percentile));
    }
    case KpiKind::jitter: {
      std::vector<std::int64_t> lat;
      lat.reserve(w.samples.size());
      for (const LinkSample& s : w.samples) lat.push_back(s.latency_us);
      std::int64_t median = nearest_rank(lat, 0.5);
      std::vector<std::int64_t> dev;
      dev.reserve(lat.size());
      for (std::int64_t v : lat) dev.push_back(std::llabs(v - median));
      return double(nearest_rank(std::move(dev), 0.99));
    }
    case KpiKind::throughput: {
      invariant(w.span_us > 0, "window span must be positive");
      std::int64_t bits = 0;
      for (const LinkSample& s : w.samples) bits += s.delivered_bits;
      return double(bits) / (double(w.span_us) / double(kUsPerSec));
    }
    case KpiKind::reliability: {
      std::size_t lost = 0;
      for (const LinkSample& s : w.samples) lost += s.lost ? 1 : 0;
      return 1.0 - double(lost) / double(w.samples.size());
    }
  }
  invariant(false, "unreachable kpi kind");
  return 0.0;
}

KpiValues measure_window(const KpiWindow& w, double percentile) {
  KpiValues v;
  if (w.samples.empty()) {
    // No deliveries at all: the service moved no traffic in this window.
    v.throughput_bps = 0.0;
    v.reliability = 0.0;
    return v;
  }
  v.latency_us = compute_kpi(w, KpiKind::latency_pxx, percentile);
  v.jitter_us = compute_kpi(w, KpiKind::jitter, percentile);
  v.throughput_bps = compute_kpi(w, KpiKind::throughput, percentile);
  v.reliability = compute_kpi(w, KpiKind::reliability, percentile);
  return v;
}

std::string percentile_label(double p) {
  char buf[32];
  double scaled = p * 100.0;
  if (scaled == std::floor(scaled)) {
    std::snprintf(buf, sizeof(buf), "latency_p%d", int(scaled));
  } else {
    std::snprintf(buf, sizeof(buf), "latency_p%.4g", scaled);
  }
  return buf;
}

ComplianceReport evaluate_sla(const std::string& sla_id,
                              const KpiRequirementSet& req,
                              const KpiValues& values, bool fail_missing) {
  ComplianceReport report;
  report.sla_id = sla_id;

  auto add = [&](const std::string& kpi, const std::optional<double>& measured,
                 double bound, bool upper_bound) {
    ComplianceItem item;
    item.kpi = kpi;
    item.bound = bound;
    if (!measured.has_value()) {
      require(fail_missing, Errc::missing_kpi, kpi + " for " + sla_id);
      item.measured_valid = false;
      item.pass = false;
    } else {
      item.measured = *measured;
      item.pass = upper_bound ? (*measured <= bound) : (*measured >= bound);
    }
    report.items.push_back(item);
    report.compliant = report.compliant && item.pass;
  };

  add(percentile_label(req.latency_percentile), values.latency_us,
      double(req.latency_bound_us), true);
  if (req.jitter_bound_us) {
    add("jitter", values.jitter_us, double(*req.jitter_bound_us), true);
  }
  add("throughput", values.throughput_bps, double(req.throughput_dl_bps),
      false);
  add("reliability", values.reliability, req.reliability_min, false);
  return report;
}

}  // namespace orchsim
