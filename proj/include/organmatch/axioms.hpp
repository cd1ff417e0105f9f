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

// Axiomatic checkers for small instances: can a patient gain by misreporting
// their EPTS, and is an allocation efficient?
//
// Patient utility is -|assigned kdpi - true epts| when matched and -101 when
// unmatched, so any transplant beats none and utilities are integer
// throughout. Patients can only misreport the score; arrival times and organ
// data are physical facts.

#include "organmatch/mechanisms.hpp"
#include "organmatch/offline_oracle.hpp"
#include "organmatch/population.hpp"
#include "organmatch/simulator.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace organmatch {

inline constexpr int kUnmatchedUtility = -101;

/// -|kdpi - true_epts| if matched, -101 otherwise.
inline int patient_utility(std::optional<int> matched_kdpi, int true_epts)
{
  if (!matched_kdpi) return kUnmatchedUtility;
  return -std::abs(*matched_kdpi - true_epts);
}

/// A strictly profitable EPTS misreport found by enumeration. Outcomes are
/// the KDPI of the organ received (empty = unmatched); the gain is measured
/// with the true EPTS in both worlds.
struct MisreportFinding
{
  std::string patient_id;
  int true_epts = 0;
  int reported_epts = 0;
  std::optional<int> truthful_kdpi;
  std::optional<int> misreport_kdpi;
  int utility_gain = 0;

  friend bool operator==(const MisreportFinding&, const MisreportFinding&) =
    default;
};

namespace detail {

inline std::optional<int> matched_kdpi_of(const Trace& trace,
                                          const Instance& instance,
                                          const std::string& patient_id)
{
  for (const MatchedPair& pair : trace.allocation.pairs) {
    if (pair.patient_id != patient_id) continue;
    for (const Organ& organ : instance.organs)
      if (organ.id == pair.organ_id) return organ.kdpi;
  }
  return std::nullopt;
}

}  // namespace detail

/// Enumerates every reported EPTS 0..100 (except the true one) for the given
/// patient, re-running the full simulation each time, and returns the lowest
/// report that strictly improves the patient's utility, or nothing.
inline std::optional<MisreportFinding> find_profitable_misreport(
  MechanismId mechanism, const Instance& instance,
  const std::string& patient_id, std::uint64_t seed)
{
  std::size_t patient_index = instance.patients.size();
  for (std::size_t i = 0; i < instance.patients.size(); ++i)
    if (instance.patients[i].id == patient_id) patient_index = i;
  if (patient_index == instance.patients.size())
    throw ValidationError("unknown patient '" + patient_id + "'");

  const int true_epts = instance.patients[patient_index].epts;
  const Trace truthful = run_simulation(instance, mechanism, seed);
  const std::optional<int> truthful_kdpi =
    detail::matched_kdpi_of(truthful, instance, patient_id);
  const int truthful_utility = patient_utility(truthful_kdpi, true_epts);

  Instance reported = instance;
  for (int report = 0; report <= 100; ++report) {
    if (report == true_epts) continue;
    reported.patients[patient_index].epts = report;
    const Trace trace = run_simulation(reported, mechanism, seed);
    const std::optional<int> kdpi =
      detail::matched_kdpi_of(trace, reported, patient_id);
    const int utility = patient_utility(kdpi, true_epts);
    if (utility > truthful_utility) {
      return MisreportFinding{patient_id,     true_epts,
                              report,         truthful_kdpi,
                              kdpi,           utility - truthful_utility};
    }
  }
  return std::nullopt;
}

/// True iff no exchange of the patients of two matched pairs is feasible and
/// strictly decreases total cost. Validates the allocation first.
inline bool check_pairwise_swap_optimality(const Allocation& allocation,
                                           const Instance& instance)
{
  validate_allocation(allocation, instance);

  std::unordered_map<std::string_view, const Organ*> organs;
  for (const Organ& o : instance.organs) organs.emplace(o.id, &o);
  std::unordered_map<std::string_view, const Patient*> patients;
  for (const Patient& p : instance.patients) patients.emplace(p.id, &p);

  for (std::size_t i = 0; i < allocation.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < allocation.pairs.size(); ++j) {
      const Organ& organ_i = *organs.at(allocation.pairs[i].organ_id);
      const Organ& organ_j = *organs.at(allocation.pairs[j].organ_id);
      const Patient& patient_i = *patients.at(allocation.pairs[i].patient_id);
      const Patient& patient_j = *patients.at(allocation.pairs[j].patient_id);
      if (!detail::pair_feasible(organ_i, patient_j) ||
          !detail::pair_feasible(organ_j, patient_i))
        continue;
      const int before = allocation.pairs[i].cost + allocation.pairs[j].cost;
      const int after = std::abs(organ_i.kdpi - patient_j.epts) +
                        std::abs(organ_j.kdpi - patient_i.epts);
      if (after < before) return false;
    }
  }
  return true;
}

/// True iff no feasible allocation makes every patient at least as well off
/// and some patient strictly better off, under truthful-EPTS utilities.
/// Exhaustive; requires min(|organs|, |patients|) <= 8.
inline bool check_pareto_efficiency(const Allocation& allocation,
                                    const Instance& instance)
{
  if (std::min(instance.organs.size(), instance.patients.size()) > 8)
    throw ValidationError(
      "check_pareto_efficiency: min(|organs|, |patients|) must be <= 8");
  validate_allocation(allocation, instance);

  std::unordered_map<std::string_view, std::size_t> patient_index;
  for (std::size_t i = 0; i < instance.patients.size(); ++i)
    patient_index.emplace(instance.patients[i].id, i);

  std::vector<int> base_utility(instance.patients.size(), kUnmatchedUtility);
  for (const MatchedPair& pair : allocation.pairs)
    base_utility[patient_index.at(pair.patient_id)] = -pair.cost;

  std::vector<int> utility(instance.patients.size());
  const bool undominated = detail::for_each_feasible_allocation(
    instance, [&](const std::vector<std::pair<int, int>>& pairs) {
      utility.assign(instance.patients.size(), kUnmatchedUtility);
      for (const auto& [o, p] : pairs)
        utility[static_cast<std::size_t>(p)] =
          -std::abs(instance.organs[o].kdpi - instance.patients[p].epts);
      bool some_better = false;
      for (std::size_t i = 0; i < utility.size(); ++i) {
        if (utility[i] < base_utility[i]) return true;  // not dominating
        if (utility[i] > base_utility[i]) some_better = true;
      }
      return !some_better;  // stop on a dominating allocation
    });
  return undominated;
}

}  // namespace organmatch
