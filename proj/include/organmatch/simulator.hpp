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

// Discrete-event replay of an instance through an online mechanism.
//
// Event order is fixed: days ascend; within a day all patient arrivals
// precede all organ arrivals (a same-day registrant can receive a same-day
// organ); within a kind, ids ascend. Matched patients leave the waitlist
// immediately; an organ that finds no waiting patient is wasted.

#include "organmatch/mechanisms.hpp"
#include "organmatch/offline_oracle.hpp"
#include "organmatch/population.hpp"
#include "organmatch/rational.hpp"
#include "organmatch/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace organmatch {

enum class EventKind
{
  patient_arrival,
  organ_arrival,
};

struct TraceEvent
{
  int day = 0;
  EventKind kind = EventKind::patient_arrival;
  std::string subject_id;
  // Present exactly for organ arrivals; empty decision means wasted.
  std::optional<std::string> decision;
  std::optional<int> pair_cost;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace
{
  std::vector<TraceEvent> events;
  Allocation allocation;
  std::vector<std::string> wasted_organs;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Online total cost over offline total cost, defined only at equal matched
/// cardinality. `infinite` marks a positive online cost against a zero-cost
/// offline optimum; `undefined` marks incomparable cardinalities.
struct CompetitiveRatio
{
  enum class Kind
  {
    finite,
    infinite,
    undefined,
  };

  Kind kind = Kind::undefined;
  Rational value = 0;

  friend bool operator==(const CompetitiveRatio&, const CompetitiveRatio&) =
    default;
};

struct Metrics
{
  long long total_cost = 0;
  int matched_count = 0;
  int wasted_count = 0;
  std::optional<Rational> mean_abs_diff;
  std::optional<int> max_abs_diff;
  std::optional<Rational> mean_wait_days;
  CompetitiveRatio competitive_ratio;
};

/// Replays the arrival sequence through `mechanism`. Deterministic in
/// (instance, mechanism, seed); the random mechanism draws from the
/// "random_assign" substream of `seed`. Expects a valid instance.
inline Trace run_simulation(const Instance& instance, MechanismId mechanism,
                            std::uint64_t seed)
{
  RngStream stream = derive_stream(seed, "random_assign");
  Trace trace;
  std::vector<Patient> waiting;
  std::vector<std::pair<std::string, std::string>> matched;

  std::size_t next_patient = 0;
  std::size_t next_organ = 0;
  while (next_patient < instance.patients.size() ||
         next_organ < instance.organs.size()) {
    int day = std::numeric_limits<int>::max();
    if (next_patient < instance.patients.size())
      day = std::min(day, instance.patients[next_patient].arrival_day);
    if (next_organ < instance.organs.size())
      day = std::min(day, instance.organs[next_organ].arrival_day);

    while (next_patient < instance.patients.size() &&
           instance.patients[next_patient].arrival_day == day) {
      const Patient& patient = instance.patients[next_patient++];
      waiting.push_back(patient);
      trace.events.push_back(TraceEvent{day, EventKind::patient_arrival,
                                        patient.id, std::nullopt,
                                        std::nullopt});
    }

    while (next_organ < instance.organs.size() &&
           instance.organs[next_organ].arrival_day == day) {
      const Organ& organ = instance.organs[next_organ++];
      const WaitlistState state{waiting, day};
      const std::optional<std::string> decision =
        assign(mechanism, organ, state, stream);
      std::optional<int> cost;
      if (decision) {
        for (std::size_t i = 0; i < waiting.size(); ++i) {
          if (waiting[i].id == *decision) {
            cost = std::abs(organ.kdpi - waiting[i].epts);
            waiting.erase(waiting.begin() + static_cast<std::ptrdiff_t>(i));
            break;
          }
        }
        if (!cost)
          throw ValidationError("mechanism returned a patient not in the waitlist");
        matched.emplace_back(organ.id, *decision);
      } else {
        trace.wasted_organs.push_back(organ.id);
      }
      trace.events.push_back(
        TraceEvent{day, EventKind::organ_arrival, organ.id, decision, cost});
    }
  }

  trace.allocation = make_allocation(instance, matched);
  return trace;
}

/// Aggregates a trace against the offline optimum for the same instance.
/// Throws if the offline allocation references ids the trace never saw.
inline Metrics compute_metrics(const Trace& trace, const Allocation& offline)
{
  std::unordered_map<std::string_view, int> patient_day;
  std::unordered_map<std::string_view, int> organ_day;
  for (const TraceEvent& event : trace.events) {
    if (event.kind == EventKind::patient_arrival)
      patient_day.emplace(event.subject_id, event.day);
    else
      organ_day.emplace(event.subject_id, event.day);
  }
  for (const MatchedPair& pair : offline.pairs) {
    if (!organ_day.contains(pair.organ_id) ||
        !patient_day.contains(pair.patient_id))
      throw ValidationError(
        "offline allocation does not belong to this trace's instance");
  }

  Metrics metrics;
  metrics.total_cost = trace.allocation.total_cost;
  metrics.matched_count = trace.allocation.matched_count;
  metrics.wasted_count = static_cast<int>(trace.wasted_organs.size());

  if (metrics.matched_count > 0) {
    metrics.mean_abs_diff =
      Rational(metrics.total_cost, metrics.matched_count);
    int max_diff = 0;
    long long wait_sum = 0;
    for (const MatchedPair& pair : trace.allocation.pairs) {
      max_diff = std::max(max_diff, pair.cost);
      wait_sum += organ_day.at(pair.organ_id) - patient_day.at(pair.patient_id);
    }
    metrics.max_abs_diff = max_diff;
    metrics.mean_wait_days = Rational(wait_sum, metrics.matched_count);
  }

  if (metrics.matched_count != offline.matched_count) {
    metrics.competitive_ratio.kind = CompetitiveRatio::Kind::undefined;
  } else if (offline.total_cost > 0) {
    metrics.competitive_ratio.kind = CompetitiveRatio::Kind::finite;
    metrics.competitive_ratio.value =
      Rational(metrics.total_cost, offline.total_cost);
  } else if (metrics.total_cost == 0) {
    metrics.competitive_ratio.kind = CompetitiveRatio::Kind::finite;
    metrics.competitive_ratio.value = 1;
  } else {
    metrics.competitive_ratio.kind = CompetitiveRatio::Kind::infinite;
  }
  return metrics;
}

}  // namespace organmatch
