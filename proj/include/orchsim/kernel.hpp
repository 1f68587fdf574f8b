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

#ifndef ORCHSIM_KERNEL_HPP
#define ORCHSIM_KERNEL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "orchsim/common.hpp"
#include "orchsim/rng.hpp"

namespace orchsim {

class SimKernel;

/// One delivered event, as recorded in the run trace.
struct TraceEntry {
  SimTime t = 0;
  std::uint64_t seq = 0;
  std::string target;
  std::string kind;
};

/// Deterministic discrete-event engine. Events are delivered strictly by
/// (time, insertion sequence); the clock never moves backwards.
class SimKernel {
 public:
  using Handler = std::function<void(SimKernel&)>;

  explicit SimKernel(std::uint64_t scenario_seed) : seed_(scenario_seed) {}

  SimKernel(const SimKernel&) = delete;
  SimKernel& operator=(const SimKernel&) = delete;

  SimTime now() const { return now_; }
  std::uint64_t scenario_seed() const { return seed_; }

  /// Queues an event. Throws SchedulingInPast if at < now().
  void schedule(SimTime at, std::string target, std::string kind, Handler fn);

  void schedule_in(SimTime delay, std::string target, std::string kind,
                   Handler fn) {
    schedule(now_ + delay, std::move(target), std::move(kind), std::move(fn));
  }

  /// Delivers every event with at <= t_end in (at, seq) order, then sets the
  /// clock to t_end. Each delivery is appended to the trace.
  void run_until(SimTime t_end);

  /// Persistent named stream; repeated calls with one name alias the same
  /// stream object.
  RngStream& rng(const std::string& name);

  const std::vector<TraceEntry>& trace() const { return trace_; }

  /// Newline-delimited "t_us,seq,target,event_kind" records.
  std::string trace_text() const;

  std::size_t events_delivered() const { return trace_.size(); }

 private:
  struct Pending {
    SimTime at;
    std::uint64_t seq;
    std::string target;
    std::string kind;
    Handler fn;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  std::uint64_t seed_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::map<std::string, RngStream> streams_;
  std::vector<TraceEntry> trace_;
};

}  // namespace orchsim

#endif  // ORCHSIM_KERNEL_HPP
