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

#ifndef ORCHSIM_INTRA_ORCH_HPP
#define ORCHSIM_INTRA_ORCH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "orchsim/access_net.hpp"
#include "orchsim/common.hpp"

namespace orchsim {

enum class NodeTier { edge, core };

std::string_view node_tier_name(NodeTier t);
std::optional<NodeTier> node_tier_from_name(std::string_view s);

struct ComputeNode {
  std::string id;
  NodeTier tier = NodeTier::edge;
  std::int64_t cpu_units = 0;
  std::int64_t mem_mb = 0;
  PowerModel power;
  std::int64_t committed_cpu = 0;
  std::int64_t committed_mem = 0;

  std::int64_t free_cpu() const { return cpu_units - committed_cpu; }
  std::int64_t free_mem() const { return mem_mb - committed_mem; }
  double load_fraction() const {
    return cpu_units > 0 ? double(committed_cpu) / double(cpu_units) : 0.0;
  }

  void validate() const;
};

struct ServiceFunction {
  std::int64_t cpu_units = 0;
  std::int64_t mem_mb = 0;
  std::int64_t egress_bps = 0;
};

struct ServiceChain {
  std::string id;
  std::vector<ServiceFunction> functions;  // ordered

  void validate() const;
};

struct PlacementPlan {
  std::string chain;
  std::vector<std::string> assignments;  // function index -> node id
  double est_power_w = 0.0;
  std::int64_t est_latency_us = 0;
  double cost = 0.0;
};

/// Demand prediction: exponentially weighted moving average per dimension.
struct ResourceUsage {
  double cpu_units = 0.0;
  double mem_mb = 0.0;
  double egress_bps = 0.0;
};

struct Profile {
  ResourceUsage predicted;
  double alpha = 0.5;
};

enum class ScaleActionType { scale_up, scale_down, re_place };

struct ScaleAction {
  ScaleActionType type = ScaleActionType::scale_up;
  std::string chain;
  std::size_t function_index = 0;
  std::int64_t target_cpu = 0;
  std::int64_t target_mem = 0;
};

/// Domain capability summary advertised to the inter-domain orchestrator.
struct CapabilityRecord {
  std::string domain;
  std::int64_t free_bps = 0;       // best single-AT free capacity
  std::int64_t min_latency_us = 0; // best active-AT base latency
  double reliability_floor = 0.0;  // best active-AT (1 - PER)
  double unit_cost_per_gbps = 0.0;
  std::vector<std::string> prefixes;  // covered zone ids, sorted
};

/// s_t = alpha * x_t + (1 - alpha) * s_{t-1}, s_0 = x_0, per dimension.
Profile profile_predict(const std::vector<ResourceUsage>& history,
                        double alpha);

/// Per-domain orchestrator for service placement and scaling.
class IntraOrch {
 public:
  IntraOrch(std::string domain, AccessNet& net,
            double unit_cost_per_gbps = 1.0,
            double lambda_w_per_us = 0.001,
            std::int64_t internode_latency_us = 200)
      : domain_(std::move(domain)),
        net_(net),
        unit_cost_per_gbps_(unit_cost_per_gbps),
        lambda_w_per_us_(lambda_w_per_us),
        internode_latency_us_(internode_latency_us) {}

  void add_node(ComputeNode node);
  const ComputeNode& node(const std::string& id) const;
  const std::map<std::string, ComputeNode>& nodes() const { return nodes_; }

  /// Finds and commits the feasible assignment minimising
  ///   cost = est_power_w + lambda * est_latency_us.
  /// Exhaustive when |nodes|^|functions| <= 100000, first-fit-decreasing by
  /// cpu above that bound. Assignment-vector ties go to the
  /// lexicographically smallest node-id sequence.
  PlacementPlan place_service(const ServiceChain& chain);

  /// Computes the plan without committing resources.
  PlacementPlan plan_service(const ServiceChain& chain) const;

  /// Commits an already computed plan after re-checking feasibility.
  void commit_plan(const ServiceChain& chain, const PlacementPlan& plan);

  void release_service(const ServiceChain& chain, const PlacementPlan& plan);

  /// Dead band: scale up (to 1.25x predicted) when prediction exceeds 80% of
  /// the allocation on any dimension, down when it stays below 30% on all,
  /// re-place when the hosting node cannot absorb the scale-up.
  std::vector<ScaleAction> scale_service(const ServiceChain& chain,
                                         const Profile& profile,
                                         const PlacementPlan& plan) const;

  /// Applies a scale action: adjusts the hosting node's committed resources
  /// and rewrites the function's requirement to the action's targets.
  void apply_scale(ServiceChain& chain, const PlacementPlan& plan,
                   const ScaleAction& action);

  /// Pure summary of currently free resources and reachable zones.
  CapabilityRecord advertise_capabilities() const;

  double lambda_w_per_us() const { return lambda_w_per_us_; }

 private:
  struct CostedAssignment {
    double power = 0.0;
    std::int64_t latency = 0;
    double cost = 0.0;
    bool feasible = false;
  };
  CostedAssignment cost_assignment(const ServiceChain& chain,
                                   const std::vector<std::string>& nodes) const;
  PlacementPlan plan_exhaustive(const ServiceChain& chain) const;
  PlacementPlan plan_first_fit(const ServiceChain& chain) const;
  void commit(const ServiceChain& chain, const PlacementPlan& plan);
  static void check_conservation(const ComputeNode& n);

  std::string domain_;
  AccessNet& net_;
  double unit_cost_per_gbps_;
  double lambda_w_per_us_;
  std::int64_t internode_latency_us_;
  std::map<std::string, ComputeNode> nodes_;
};

}  // namespace orchsim

#endif  // ORCHSIM_INTRA_ORCH_HPP
