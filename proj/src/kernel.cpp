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

#include "orchsim/kernel.hpp"

#include <utility>

namespace orchsim {

void SimKernel::schedule(SimTime at, std::string target, std::string kind,
                         Handler fn) {
  require(at >= now_, Errc::scheduling_in_past,
          "event for " + target + " at t=" + std::to_string(at) +
              "us, clock is " + std::to_string(now_) + "us");
  queue_.push(Pending{at, next_seq_++, std::move(target), std::move(kind),
                      std::move(fn)});
}

void SimKernel::run_until(SimTime t_end) {
  invariant(t_end >= now_, "run_until target behind clock");
  while (!queue_.empty() && queue_.top().at <= t_end) {
    Pending ev = queue_.top();
    queue_.pop();
    invariant(ev.at >= now_, "event older than clock");
    now_ = ev.at;
    trace_.push_back(TraceEntry{ev.at, ev.seq, ev.target, ev.kind});
    if (ev.fn) ev.fn(*this);
  }
  now_ = t_end;
}

RngStream& SimKernel::rng(const std::string& name) {
  auto it = streams_.find(name);
  if (it == streams_.end()) {
    it = streams_.emplace(name, RngStream(name, seed_)).first;
  }
  return it->second;
}

std::string SimKernel::trace_text() const {
  std::string out;
  out.reserve(trace_.size() * 32);
  for (const TraceEntry& e : trace_) {
    out += std::to_string(e.t);
    out += ',';
    out += std::to_string(e.seq);
    out += ',';
    out += e.target;
    out += ',';
    out += e.kind;
    out += '\n';
  }
  return out;
}

}  // namespace orchsim
