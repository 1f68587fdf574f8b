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

#include "orchsim/intra_orch.hpp"

#include <algorithm>
#include <cmath>

namespace orchsim {

std::string_view node_tier_name(NodeTier t) {
  switch (t) {
    case NodeTier::edge: return "edge";
    case NodeTier::core: return "core";
  }
  return "unknown";
}

std::optional<NodeTier> node_tier_from_name(std::string_view s) {
  if (s == "edge") return NodeTier::edge;
  if (s == "core") return NodeTier::core;
  return std::nullopt;
}

void ComputeNode::validate() const {
  require(!id.empty(), Errc::validation_error, "node id must not be empty");
  require(cpu_units > 0 && mem_mb > 0, Errc::validation_error,
          "node " + id + ": cpu_units and mem_mb must be positive");
  power.validate("node " + id);
}

void ServiceChain::validate() const {
  require(!functions.empty(), Errc::validation_error,
          "service chain " + id + " must have at least one function");
  for (const ServiceFunction& f : functions) {
    require(f.cpu_units > 0 && f.mem_mb > 0 && f.egress_bps > 0,
            Errc::validation_error,
            "service chain " + id + ": function requirements must be positive");
  }
}

Profile profile_predict(const std::vector<ResourceUsage>& history,
                        double alpha) {
  require(!history.empty(), Errc::empty_history, "profile needs observations");
  require(alpha > 0.0 && alpha <= 1.0, Errc::validation_error,
          "alpha must lie in (0,1]");
  ResourceUsage s = history.front();
  for (std::size_t i = 1; i < history.size(); ++i) {
    s.cpu_units = alpha * history[i].cpu_units + (1.0 - alpha) * s.cpu_units;
    s.mem_mb = alpha * history[i].mem_mb + (1.0 - alpha) * s.mem_mb;
    s.egress_bps = alpha * history[i].egress_bps + (1.0 - alpha) * s.egress_bps;
  }
  invariant(s.cpu_units >= 0.0 && s.mem_mb >= 0.0 && s.egress_bps >= 0.0,
            "prediction must be non-negative");
  return Profile{s, alpha};
}

void IntraOrch::add_node(ComputeNode node) {
  node.validate();
  require(nodes_.count(node.id) == 0, Errc::duplicate_id,
          "node " + node.id + " already present in domain " + domain_);
  nodes_.emplace(node.id, std::move(node));
}

const ComputeNode& IntraOrch::node(const std::string& id) const {
  auto it = nodes_.find(id);
  require(it != nodes_.end(), Errc::validation_error, "unknown node " + id);
  return it->second;
}

void IntraOrch::check_conservation(const ComputeNode& n) {
  invariant(n.committed_cpu >= 0 && n.committed_cpu <= n.cpu_units,
            "node " + n.id + " cpu over capacity");
  invariant(n.committed_mem >= 0 && n.committed_mem <= n.mem_mb,
            "node " + n.id + " mem over capacity");
}

IntraOrch::CostedAssignment IntraOrch::cost_assignment(
    const ServiceChain& chain, const std::vector<std::string>& assign) const {
  CostedAssignment out;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> added;
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    auto& slot = added[assign[i]];
    slot.first += chain.functions[i].cpu_units;
    slot.second += chain.functions[i].mem_mb;
  }
  for (const auto& [node_id, want] : added) {
    const ComputeNode& n = node(node_id);
    if (want.first > n.free_cpu() || want.second > n.free_mem()) {
      return out;  // infeasible
    }
  }
  // Marginal power: linear in the cpu share each node takes on.
  double power = 0.0;
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    const ComputeNode& n = node(assign[i]);
    power += (n.power.p_max_w - n.power.p_idle_w) *
             (double(chain.functions[i].cpu_units) / double(n.cpu_units));
  }
  // Chain latency: consecutive functions on distinct nodes pay one
  // inter-node hop; co-located functions pay nothing.
  std::int64_t latency = 0;
  for (std::size_t i = 1; i < chain.functions.size(); ++i) {
    if (assign[i] != assign[i - 1]) latency += internode_latency_us_;
  }
  out.power = power;
  out.latency = latency;
  out.cost = power + lambda_w_per_us_ * double(latency);
  out.feasible = true;
  return out;
}

PlacementPlan IntraOrch::plan_exhaustive(const ServiceChain& chain) const {
  std::vector<std::string> node_ids;
  for (const auto& [id, n] : nodes_) node_ids.push_back(id);

  const std::size_t k = chain.functions.size();
  std::vector<std::size_t> idx(k, 0);
  std::vector<std::string> assign(k);
  PlacementPlan best;
  bool found = false;
  bool done = false;

  while (!done) {
    for (std::size_t i = 0; i < k; ++i) assign[i] = node_ids[idx[i]];
    CostedAssignment c = cost_assignment(chain, assign);
    if (c.feasible) {
      // node_ids is sorted and the odometer walks index vectors in
      // lexicographic order, so strict improvement keeps the
      // lexicographically smallest assignment on cost ties.
      if (!found || c.cost < best.cost) {
        best.chain = chain.id;
        best.assignments = assign;
        best.est_power_w = c.power;
        best.est_latency_us = c.latency;
        best.cost = c.cost;
        found = true;
      }
    }
    done = true;
    for (std::size_t pos = k; pos-- > 0;) {
      if (++idx[pos] < node_ids.size()) {
        done = false;
        break;
      }
      idx[pos] = 0;
    }
  }
  require(found, Errc::no_feasible_placement, "chain " + chain.id);
  return best;
}

PlacementPlan IntraOrch::plan_first_fit(const ServiceChain& chain) const {
  // First-fit-decreasing by cpu over nodes in id order; free capacity is
  // tracked against the tentative assignment.
  std::vector<std::size_t> order(chain.functions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chain.functions[a].cpu_units > chain.functions[b].cpu_units;
  });

  std::map<std::string, std::pair<std::int64_t, std::int64_t>> tentative;
  std::vector<std::string> assign(chain.functions.size());
  for (std::size_t oi : order) {
    const ServiceFunction& fn = chain.functions[oi];
    bool placed = false;
    for (const auto& [id, n] : nodes_) {
      auto& used = tentative[id];
      if (fn.cpu_units <= n.free_cpu() - used.first &&
          fn.mem_mb <= n.free_mem() - used.second) {
        used.first += fn.cpu_units;
        used.second += fn.mem_mb;
        assign[oi] = id;
        placed = true;
        break;
      }
    }
    require(placed, Errc::no_feasible_placement,
            "chain " + chain.id + " (first-fit)");
  }
  CostedAssignment c = cost_assignment(chain, assign);
  invariant(c.feasible, "first-fit produced an infeasible assignment");
  PlacementPlan plan;
  plan.chain = chain.id;
  plan.assignments = assign;
  plan.est_power_w = c.power;
  plan.est_latency_us = c.latency;
  plan.cost = c.cost;
  return plan;
}

PlacementPlan IntraOrch::plan_service(const ServiceChain& chain) const {
  chain.validate();
  require(!nodes_.empty(), Errc::no_feasible_placement,
          "domain " + domain_ + " has no compute nodes");
  double combos = std::pow(double(nodes_.size()),
                           double(chain.functions.size()));
  if (combos <= 100000.0) return plan_exhaustive(chain);
  return plan_first_fit(chain);
}

void IntraOrch::commit(const ServiceChain& chain, const PlacementPlan& plan) {
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    ComputeNode& n = nodes_.at(plan.assignments[i]);
    n.committed_cpu += chain.functions[i].cpu_units;
    n.committed_mem += chain.functions[i].mem_mb;
    check_conservation(n);
  }
}

PlacementPlan IntraOrch::place_service(const ServiceChain& chain) {
  PlacementPlan plan = plan_service(chain);
  commit(chain, plan);
  return plan;
}

void IntraOrch::commit_plan(const ServiceChain& chain,
                            const PlacementPlan& plan) {
  CostedAssignment c = cost_assignment(chain, plan.assignments);
  require(c.feasible, Errc::no_feasible_placement,
          "plan for chain " + chain.id + " no longer fits");
  commit(chain, plan);
}

void IntraOrch::release_service(const ServiceChain& chain,
                                const PlacementPlan& plan) {
  invariant(plan.assignments.size() == chain.functions.size(),
            "plan does not match chain " + chain.id);
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    ComputeNode& n = nodes_.at(plan.assignments[i]);
    n.committed_cpu -= chain.functions[i].cpu_units;
    n.committed_mem -= chain.functions[i].mem_mb;
    check_conservation(n);
  }
}

std::vector<ScaleAction> IntraOrch::scale_service(const ServiceChain& chain,
                                                  const Profile& profile,
                                                  const PlacementPlan& plan) const {
  invariant(plan.assignments.size() == chain.functions.size(),
            "plan does not match chain " + chain.id);
  double alloc_cpu = 0.0, alloc_mem = 0.0, alloc_egress = 0.0;
  for (const ServiceFunction& f : chain.functions) {
    alloc_cpu += double(f.cpu_units);
    alloc_mem += double(f.mem_mb);
    alloc_egress += double(f.egress_bps);
  }
  const ResourceUsage& pred = profile.predicted;
  bool up = pred.cpu_units > 0.8 * alloc_cpu || pred.mem_mb > 0.8 * alloc_mem ||
            pred.egress_bps > 0.8 * alloc_egress;
  bool down = pred.cpu_units < 0.3 * alloc_cpu && pred.mem_mb < 0.3 * alloc_mem &&
              pred.egress_bps < 0.3 * alloc_egress;
  if (!up && !down) return {};

  double cpu_ratio = alloc_cpu > 0.0 ? pred.cpu_units / alloc_cpu : 0.0;
  double mem_ratio = alloc_mem > 0.0 ? pred.mem_mb / alloc_mem : 0.0;
  auto target_for = [&](const ServiceFunction& f) {
    std::int64_t cpu = std::max<std::int64_t>(
        1, std::int64_t(std::ceil(1.25 * cpu_ratio * double(f.cpu_units))));
    std::int64_t mem = std::max<std::int64_t>(
        1, std::int64_t(std::ceil(1.25 * mem_ratio * double(f.mem_mb))));
    return std::pair<std::int64_t, std::int64_t>(cpu, mem);
  };

  if (up) {
    // Growth capped by per-node headroom; when the hosting node cannot
    // absorb the delta the whole chain is re-placed instead.
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> delta;
    std::vector<ScaleAction> actions;
    for (std::size_t i = 0; i < chain.functions.size(); ++i) {
      auto [cpu, mem] = target_for(chain.functions[i]);
      cpu = std::max(cpu, chain.functions[i].cpu_units);
      mem = std::max(mem, chain.functions[i].mem_mb);
      auto& d = delta[plan.assignments[i]];
      d.first += cpu - chain.functions[i].cpu_units;
      d.second += mem - chain.functions[i].mem_mb;
      actions.push_back(ScaleAction{ScaleActionType::scale_up, chain.id, i,
                                    cpu, mem});
    }
    for (const auto& [node_id, d] : delta) {
      const ComputeNode& n = node(node_id);
      if (d.first > n.free_cpu() || d.second > n.free_mem()) {
        return {ScaleAction{ScaleActionType::re_place, chain.id, 0, 0, 0}};
      }
    }
    return actions;
  }

  std::vector<ScaleAction> actions;
  for (std::size_t i = 0; i < chain.functions.size(); ++i) {
    auto [cpu, mem] = target_for(chain.functions[i]);
    cpu = std::min(cpu, chain.functions[i].cpu_units);
    mem = std::min(mem, chain.functions[i].mem_mb);
    actions.push_back(ScaleAction{ScaleActionType::scale_down, chain.id, i,
                                  cpu, mem});
  }
  return actions;
}

void IntraOrch::apply_scale(ServiceChain& chain, const PlacementPlan& plan,
                            const ScaleAction& action) {
  require(action.type != ScaleActionType::re_place, Errc::validation_error,
          "re_place is applied by re-running placement");
  invariant(action.function_index < chain.functions.size(),
            "scale action function index out of range");
  ServiceFunction& fn = chain.functions[action.function_index];
  ComputeNode& n = nodes_.at(plan.assignments[action.function_index]);
  n.committed_cpu += action.target_cpu - fn.cpu_units;
  n.committed_mem += action.target_mem - fn.mem_mb;
  fn.cpu_units = action.target_cpu;
  fn.mem_mb = action.target_mem;
  check_conservation(n);
}

CapabilityRecord IntraOrch::advertise_capabilities() const {
  CapabilityRecord rec;
  rec.domain = domain_;
  rec.unit_cost_per_gbps = unit_cost_per_gbps_;
  std::int64_t best_free = 0;
  std::int64_t best_latency = -1;
  double best_reliability = 0.0;
  std::set<std::string> zones;
  for (const auto& [id, at] : net_.ats()) {
    for (const std::string& z : at.coverage) zones.insert(z);
    if (at.state != AtState::active) continue;
    best_free = std::max(best_free, at.headroom_bps());
    if (best_latency < 0 || at.base_latency_us < best_latency) {
      best_latency = at.base_latency_us;
    }
    best_reliability = std::max(best_reliability, 1.0 - at.per_error_rate);
  }
  rec.free_bps = best_free;
  rec.min_latency_us = best_latency < 0 ? 0 : best_latency;
  rec.reliability_floor = best_reliability;
  rec.prefixes.assign(zones.begin(), zones.end());
  return rec;
}

}  // namespace orchsim
