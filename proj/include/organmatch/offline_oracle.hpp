#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 the organmatch authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Offline-optimal allocation: with full hindsight over the horizon, match
// organs to patients maximizing the number of transplants first, then
// minimizing total |kdpi - epts|. A pair is feasible only if the patient
// arrived on or before the organ: hindsight does not bend arrival order.
//
// Among cost-optimal allocations the result is pinned to the
// lexicographically smallest pair set (pairs ordered by (organ_id,
// patient_id)), so outputs are exactly reproducible and comparable against
// the exhaustive reference. Costs are integers throughout; no floating
// point enters the oracle.

#include "organmatch/errors.hpp"
#include "organmatch/population.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace organmatch {

struct MatchedPair
{
  std::string organ_id;
  std::string patient_id;
  int cost = 0;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// A feasible partial matching. `pairs` is kept sorted by (organ_id,
/// patient_id); total_cost is the sum of per-pair |kdpi - epts|.
struct Allocation
{
  std::vector<MatchedPair> pairs;
  long long total_cost = 0;
  int matched_count = 0;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Structural check of an allocation against its instance: ids exist, no
/// organ or patient is used twice, every pair respects arrival order, pair
/// costs equal |kdpi - epts| and the totals add up.
inline void validate_allocation(const Allocation& allocation,
                                const Instance& instance)
{
  std::unordered_map<std::string_view, const Organ*> organs;
  for (const Organ& o : instance.organs) organs.emplace(o.id, &o);
  std::unordered_map<std::string_view, const Patient*> patients;
  for (const Patient& p : instance.patients) patients.emplace(p.id, &p);

  std::unordered_set<std::string_view> used_organs, used_patients;
  long long total = 0;
  for (const MatchedPair& pair : allocation.pairs) {
    auto o = organs.find(pair.organ_id);
    if (o == organs.end())
      throw ValidationError("allocation references unknown organ '" +
                            pair.organ_id + "'");
    auto p = patients.find(pair.patient_id);
    if (p == patients.end())
      throw ValidationError("allocation references unknown patient '" +
                            pair.patient_id + "'");
    if (!used_organs.insert(pair.organ_id).second)
      throw ValidationError("organ '" + pair.organ_id + "' matched twice");
    if (!used_patients.insert(pair.patient_id).second)
      throw ValidationError("patient '" + pair.patient_id + "' matched twice");
    if (p->second->arrival_day > o->second->arrival_day)
      throw ValidationError("infeasible pair: patient '" + pair.patient_id +
                            "' arrives after organ '" + pair.organ_id + "'");
    const int cost = std::abs(o->second->kdpi - p->second->epts);
    if (cost != pair.cost)
      throw ValidationError("pair (" + pair.organ_id + ", " + pair.patient_id +
                            ") carries cost " + std::to_string(pair.cost) +
                            ", expected " + std::to_string(cost));
    total += cost;
  }
  if (total != allocation.total_cost)
    throw ValidationError("allocation total_cost mismatch");
  if (allocation.matched_count !=
      static_cast<int>(allocation.pairs.size()))
    throw ValidationError("allocation matched_count mismatch");
}

/// Builds a canonical Allocation from (organ_id, patient_id) pairs,
/// computing costs from the instance and validating feasibility.
inline Allocation make_allocation(
  const Instance& instance,
  const std::vector<std::pair<std::string, std::string>>& id_pairs)
{
  std::unordered_map<std::string_view, const Organ*> organs;
  for (const Organ& o : instance.organs) organs.emplace(o.id, &o);
  std::unordered_map<std::string_view, const Patient*> patients;
  for (const Patient& p : instance.patients) patients.emplace(p.id, &p);

  Allocation allocation;
  for (const auto& [organ_id, patient_id] : id_pairs) {
    auto o = organs.find(organ_id);
    auto p = patients.find(patient_id);
    if (o == organs.end())
      throw ValidationError("unknown organ '" + organ_id + "'");
    if (p == patients.end())
      throw ValidationError("unknown patient '" + patient_id + "'");
    const int cost = std::abs(o->second->kdpi - p->second->epts);
    allocation.pairs.push_back(MatchedPair{organ_id, patient_id, cost});
    allocation.total_cost += cost;
  }
  std::sort(allocation.pairs.begin(), allocation.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) {
              if (a.organ_id != b.organ_id) return a.organ_id < b.organ_id;
              return a.patient_id < b.patient_id;
            });
  allocation.matched_count = static_cast<int>(allocation.pairs.size());
  validate_allocation(allocation, instance);
  return allocation;
}

namespace detail {

inline bool pair_feasible(const Organ& organ, const Patient& patient)
{
  return patient.arrival_day <= organ.arrival_day;
}

/// Enumerates every feasible partial matching exactly once, iterating over
/// the smaller side. `fn` receives (organ_index, patient_index) pairs and
/// returns false to stop early; the function returns false iff stopped.
inline bool for_each_feasible_allocation(
  const Instance& instance,
  const std::function<bool(const std::vector<std::pair<int, int>>&)>& fn)
{
  const int organ_count = static_cast<int>(instance.organs.size());
  const int patient_count = static_cast<int>(instance.patients.size());
  const bool organs_outer = organ_count <= patient_count;
  const int outer = organs_outer ? organ_count : patient_count;
  const int inner = organs_outer ? patient_count : organ_count;

  std::vector<char> used(inner, 0);
  std::vector<std::pair<int, int>> current;

  const std::function<bool(int)> recurse = [&](int index) -> bool {
    if (index == outer) return fn(current);
    if (!recurse(index + 1)) return false;  // leave `index` unmatched
    for (int j = 0; j < inner; ++j) {
      if (used[j]) continue;
      const int organ = organs_outer ? index : j;
      const int patient = organs_outer ? j : index;
      if (!pair_feasible(instance.organs[organ], instance.patients[patient]))
        continue;
      used[j] = 1;
      current.emplace_back(organ, patient);
      const bool keep_going = recurse(index + 1);
      current.pop_back();
      used[j] = 0;
      if (!keep_going) return false;
    }
    return true;
  };
  return recurse(0);
}

/// Min-cost max-cardinality bipartite assignment via successive shortest
/// augmenting paths, followed by a fixing pass that selects the
/// lexicographically smallest optimal pair set.
class MinCostAssignment
{
public:
  explicit MinCostAssignment(const Instance& instance) : instance_(instance)
  {
    build_graph();
  }

  std::vector<std::pair<int, int>> solve()
  {
    run_successive_shortest_paths();
    verify_potentials();
    return fix_lexicographic();
  }

private:
  struct Arc
  {
    int to;
    int cap;
    long long cost;
  };

  struct Edge
  {
    int organ;
    int patient;
    long long cost;
    int arc;  // forward arc id; cap 0 means the edge carries flow
  };

  static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

  int organ_node(int organ) const { return 1 + organ; }
  int patient_node(int patient) const
  {
    return 1 + static_cast<int>(instance_.organs.size()) + patient;
  }

  void add_arc(int from, int to, int cap, long long cost)
  {
    adjacency_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back(Arc{to, cap, cost});
    adjacency_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back(Arc{from, 0, -cost});
  }

  void build_graph()
  {
    const int organ_count = static_cast<int>(instance_.organs.size());
    const int patient_count = static_cast<int>(instance_.patients.size());
    node_count_ = organ_count + patient_count + 2;
    source_ = 0;
    sink_ = node_count_ - 1;
    adjacency_.assign(node_count_, {});
    potential_.assign(node_count_, 0);

    for (int o = 0; o < organ_count; ++o)
      add_arc(source_, organ_node(o), 1, 0);
    for (int p = 0; p < patient_count; ++p)
      add_arc(patient_node(p), sink_, 1, 0);
    for (int o = 0; o < organ_count; ++o) {
      for (int p = 0; p < patient_count; ++p) {
        if (!pair_feasible(instance_.organs[o], instance_.patients[p]))
          continue;
        const long long cost =
          std::abs(instance_.organs[o].kdpi - instance_.patients[p].epts);
        edges_.push_back(
          Edge{o, p, cost, static_cast<int>(arcs_.size())});
        add_arc(organ_node(o), patient_node(p), 1, cost);
      }
    }
  }

  long long reduced_cost(int from, int arc_id) const
  {
    const Arc& arc = arcs_[arc_id];
    return arc.cost + potential_[from] - potential_[arc.to];
  }

  void run_successive_shortest_paths()
  {
    std::vector<long long> dist;
    std::vector<int> parent_arc;
    while (true) {
      dist.assign(node_count_, kInf);
      parent_arc.assign(node_count_, -1);
      dist[source_] = 0;
      using QueueItem = std::pair<long long, int>;
      std::priority_queue<QueueItem, std::vector<QueueItem>,
                          std::greater<QueueItem>>
        queue;
      queue.emplace(0, source_);
      while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d != dist[u]) continue;
        for (int arc_id : adjacency_[u]) {
          const Arc& arc = arcs_[arc_id];
          if (arc.cap <= 0) continue;
          const long long nd = d + reduced_cost(u, arc_id);
          if (nd < dist[arc.to]) {
            dist[arc.to] = nd;
            parent_arc[arc.to] = arc_id;
            queue.emplace(nd, arc.to);
          }
        }
      }
      if (dist[sink_] >= kInf) break;

      for (int v = sink_; v != source_; v = arcs_[parent_arc[v] ^ 1].to) {
        arcs_[parent_arc[v]].cap -= 1;
        arcs_[parent_arc[v] ^ 1].cap += 1;
      }
      ++matched_;
      // Capped potential update keeps all residual reduced costs >= 0.
      for (int v = 0; v < node_count_; ++v)
        potential_[v] += std::min(dist[v], dist[sink_]);
    }
    for (const Edge& edge : edges_)
      if (arcs_[edge.arc].cap == 0) optimal_cost_ += edge.cost;
  }

  void verify_potentials() const
  {
    for (int u = 0; u < node_count_; ++u)
      for (int arc_id : adjacency_[u])
        if (arcs_[arc_id].cap > 0 && reduced_cost(u, arc_id) < 0)
          throw std::logic_error("assignment solver: potential invariant broken");
  }

  // Zero-reduced-cost residual adjacency over alive nodes.
  std::vector<std::vector<int>> zero_adjacency(
    const std::vector<char>& alive) const
  {
    std::vector<std::vector<int>> zero(node_count_);
    for (int u = 0; u < node_count_; ++u) {
      if (!alive[u]) continue;
      for (int arc_id : adjacency_[u]) {
        const Arc& arc = arcs_[arc_id];
        if (arc.cap > 0 && alive[arc.to] && reduced_cost(u, arc_id) == 0)
          zero[u].push_back(arc_id);
      }
    }
    return zero;
  }

  std::vector<int> strongly_connected_components(
    const std::vector<std::vector<int>>& zero) const
  {
    // Kosaraju with explicit stacks.
    std::vector<int> order;
    order.reserve(node_count_);
    std::vector<char> visited(node_count_, 0);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int start = 0; start < node_count_; ++start) {
      if (visited[start]) continue;
      visited[start] = 1;
      stack.emplace_back(start, 0);
      while (!stack.empty()) {
        auto& [u, next] = stack.back();
        if (next < zero[u].size()) {
          const int v = arcs_[zero[u][next++]].to;
          if (!visited[v]) {
            visited[v] = 1;
            stack.emplace_back(v, 0);
          }
        } else {
          order.push_back(u);
          stack.pop_back();
        }
      }
    }

    std::vector<std::vector<int>> reverse(node_count_);
    for (int u = 0; u < node_count_; ++u)
      for (int arc_id : zero[u]) reverse[arcs_[arc_id].to].push_back(u);

    std::vector<int> component(node_count_, -1);
    int components = 0;
    std::vector<int> dfs;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (component[*it] != -1) continue;
      const int label = components++;
      component[*it] = label;
      dfs.push_back(*it);
      while (!dfs.empty()) {
        const int u = dfs.back();
        dfs.pop_back();
        for (int v : reverse[u]) {
          if (component[v] == -1) {
            component[v] = label;
            dfs.push_back(v);
          }
        }
      }
    }
    return component;
  }

  // Pushes one unit along a zero-cost cycle so `edge` carries flow,
  // without changing flow value or cost.
  void reroute_through(const Edge& edge,
                       const std::vector<std::vector<int>>& zero)
  {
    const int from = patient_node(edge.patient);
    const int to = organ_node(edge.organ);
    std::vector<int> parent(node_count_, -1);
    std::vector<char> seen(node_count_, 0);
    std::deque<int> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      if (u == to) break;
      for (int arc_id : zero[u]) {
        const int v = arcs_[arc_id].to;
        if (!seen[v]) {
          seen[v] = 1;
          parent[v] = arc_id;
          queue.push_back(v);
        }
      }
    }
    if (!seen[to])
      throw std::logic_error("assignment solver: zero path vanished");

    arcs_[edge.arc].cap -= 1;
    arcs_[edge.arc ^ 1].cap += 1;
    for (int v = to; v != from; v = arcs_[parent[v] ^ 1].to) {
      arcs_[parent[v]].cap -= 1;
      arcs_[parent[v] ^ 1].cap += 1;
    }
  }

  std::vector<std::pair<int, int>> fix_lexicographic()
  {
    std::vector<int> order(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i)
      order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const std::string& oa = instance_.organs[edges_[a].organ].id;
      const std::string& ob = instance_.organs[edges_[b].organ].id;
      if (oa != ob) return oa < ob;
      return instance_.patients[edges_[a].patient].id <
             instance_.patients[edges_[b].patient].id;
    });

    std::vector<char> alive(node_count_, 1);
    std::vector<std::pair<int, int>> result;
    long long cost_left = optimal_cost_;

    for (int remaining = matched_; remaining > 0; --remaining) {
      const auto zero = zero_adjacency(alive);
      const auto component = strongly_connected_components(zero);

      const Edge* chosen = nullptr;
      for (int index : order) {
        const Edge& edge = edges_[index];
        const int o_node = organ_node(edge.organ);
        const int p_node = patient_node(edge.patient);
        if (!alive[o_node] || !alive[p_node]) continue;
        if (arcs_[edge.arc].cap == 0) {  // already in the current optimum
          chosen = &edge;
          break;
        }
        // Usable iff forcing it keeps (count, cost) optimal: tight arc on a
        // zero-cost residual cycle.
        if (reduced_cost(o_node, edge.arc) == 0 &&
            component[o_node] == component[p_node]) {
          chosen = &edge;
          reroute_through(edge, zero);
          break;
        }
      }
      if (chosen == nullptr)
        throw std::logic_error("assignment solver: no usable pair found");

      result.emplace_back(chosen->organ, chosen->patient);
      cost_left -= chosen->cost;
      alive[organ_node(chosen->organ)] = 0;
      alive[patient_node(chosen->patient)] = 0;
    }
    if (cost_left != 0)
      throw std::logic_error("assignment solver: fixed cost drifted");
    return result;
  }

  const Instance& instance_;
  int node_count_ = 0;
  int source_ = 0;
  int sink_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<long long> potential_;
  std::vector<Edge> edges_;
  int matched_ = 0;
  long long optimal_cost_ = 0;
};

}  // namespace detail

/// Exact offline optimum: max matched count, then min total cost, then the
/// lexicographically smallest pair set. Polynomial; empty instance yields
/// the empty allocation.
inline Allocation optimal_offline(const Instance& instance)
{
  detail::MinCostAssignment solver(instance);
  std::vector<std::pair<std::string, std::string>> id_pairs;
  for (const auto& [organ, patient] : solver.solve())
    id_pairs.emplace_back(instance.organs[organ].id,
                          instance.patients[patient].id);
  return make_allocation(instance, id_pairs);
}

/// Exhaustive reference for optimal_offline, same selection contract.
/// Refuses instances with min(|organs|, |patients|) > 8.
inline Allocation brute_force_offline(const Instance& instance)
{
  const std::size_t bound =
    std::min(instance.organs.size(), instance.patients.size());
  if (bound > 8)
    throw ValidationError(
      "brute_force_offline: min(|organs|, |patients|) must be <= 8");

  bool have_best = false;
  int best_count = 0;
  long long best_cost = 0;
  std::vector<std::pair<std::string, std::string>> best_pairs;

  detail::for_each_feasible_allocation(
    instance, [&](const std::vector<std::pair<int, int>>& pairs) {
      const int count = static_cast<int>(pairs.size());
      long long cost = 0;
      for (const auto& [o, p] : pairs)
        cost += std::abs(instance.organs[o].kdpi - instance.patients[p].epts);

      if (have_best &&
          (count < best_count || (count == best_count && cost > best_cost)))
        return true;

      std::vector<std::pair<std::string, std::string>> ids;
      ids.reserve(pairs.size());
      for (const auto& [o, p] : pairs)
        ids.emplace_back(instance.organs[o].id, instance.patients[p].id);
      std::sort(ids.begin(), ids.end());

      if (!have_best || count > best_count ||
          (count == best_count && cost < best_cost) ||
          (count == best_count && cost == best_cost && ids < best_pairs)) {
        have_best = true;
        best_count = count;
        best_cost = cost;
        best_pairs = std::move(ids);
      }
      return true;
    });

  return make_allocation(instance, best_pairs);
}

}  // namespace organmatch
