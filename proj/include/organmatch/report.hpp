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

// Machine-readable run reports (schema_version "1").
//
// Reports are built from ordered JSON objects with a fixed insertion order
// and rendered with a fixed indentation, so identical inputs produce
// byte-identical files. Exact rationals appear as {"exact": "p/q",
// "decimal": "..."} with the decimal rounded to six places and explicitly
// non-authoritative; an infinite competitive ratio renders as
// {"exact": "inf", "decimal": null} and an undefined one as null.

#include "organmatch/axioms.hpp"
#include "organmatch/mechanisms.hpp"
#include "organmatch/offline_oracle.hpp"
#include "organmatch/population.hpp"
#include "organmatch/rational.hpp"
#include "organmatch/simulator.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace organmatch {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1";

inline Json rational_json(const Rational& value)
{
  Json out;
  out["exact"] = fraction_string(value);
  out["decimal"] = decimal_string(value);
  return out;
}

inline Json optional_rational_json(const std::optional<Rational>& value)
{
  if (!value) return nullptr;
  return rational_json(*value);
}

inline Json ratio_json(const CompetitiveRatio& ratio)
{
  switch (ratio.kind) {
    case CompetitiveRatio::Kind::undefined: return nullptr;
    case CompetitiveRatio::Kind::infinite: {
      Json out;
      out["exact"] = "inf";
      out["decimal"] = nullptr;
      return out;
    }
    case CompetitiveRatio::Kind::finite: return rational_json(ratio.value);
  }
  return nullptr;
}

/// Ten bins of width 10; the last bin also holds score 100.
template <typename Entries, typename ScoreOf>
std::array<int, 10> score_histogram(const Entries& entries, ScoreOf score_of)
{
  std::array<int, 10> bins{};
  for (const auto& entry : entries)
    ++bins[std::min(score_of(entry) / 10, 9)];
  return bins;
}

inline Json instance_summary_json(const Instance& instance)
{
  Json out;
  out["patient_count"] = instance.patients.size();
  out["organ_count"] = instance.organs.size();
  out["epts_histogram"] =
    score_histogram(instance.patients, [](const Patient& p) { return p.epts; });
  out["kdpi_histogram"] =
    score_histogram(instance.organs, [](const Organ& o) { return o.kdpi; });
  return out;
}

inline Json allocation_json(const Allocation& allocation)
{
  Json pairs = Json::array();
  for (const MatchedPair& pair : allocation.pairs) {
    Json entry;
    entry["organ"] = pair.organ_id;
    entry["patient"] = pair.patient_id;
    entry["cost"] = pair.cost;
    pairs.push_back(std::move(entry));
  }
  Json out;
  out["pairs"] = std::move(pairs);
  out["matched_count"] = allocation.matched_count;
  out["total_cost"] = allocation.total_cost;
  return out;
}

inline Json events_json(const Trace& trace)
{
  Json events = Json::array();
  for (const TraceEvent& event : trace.events) {
    Json entry;
    entry["day"] = event.day;
    entry["kind"] = event.kind == EventKind::patient_arrival
                      ? "patient_arrival"
                      : "organ_arrival";
    entry["id"] = event.subject_id;
    if (event.kind == EventKind::organ_arrival) {
      entry["matched_patient"] =
        event.decision ? Json(*event.decision) : Json(nullptr);
      entry["pair_cost"] = event.pair_cost ? Json(*event.pair_cost) : Json(nullptr);
    }
    events.push_back(std::move(entry));
  }
  return events;
}

inline Json metrics_json(const Metrics& metrics)
{
  Json out;
  out["total_cost"] = metrics.total_cost;
  out["matched_count"] = metrics.matched_count;
  out["wasted_count"] = metrics.wasted_count;
  out["mean_abs_diff"] = optional_rational_json(metrics.mean_abs_diff);
  out["max_abs_diff"] =
    metrics.max_abs_diff ? Json(*metrics.max_abs_diff) : Json(nullptr);
  out["mean_wait_days"] = optional_rational_json(metrics.mean_wait_days);
  out["competitive_ratio"] = ratio_json(metrics.competitive_ratio);
  return out;
}

inline Json offline_json(const Allocation& offline)
{
  Json out;
  out["matched_count"] = offline.matched_count;
  out["total_cost"] = offline.total_cost;
  return out;
}

inline Json run_report(const Instance& instance, MechanismId mechanism,
                       std::uint64_t seed, const Trace& trace,
                       const Allocation& offline, const Metrics& metrics)
{
  Json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "run";
  out["mechanism"] = std::string(mechanism_name(mechanism));
  out["seed"] = seed;
  out["instance"] = instance_summary_json(instance);
  out["decisions"] = events_json(trace);
  out["wasted_organs"] = trace.wasted_organs;
  out["allocation"] = allocation_json(trace.allocation);
  out["offline"] = offline_json(offline);
  out["metrics"] = metrics_json(metrics);
  return out;
}

struct CompareCell
{
  MechanismId mechanism;
  std::uint64_t seed;
  Metrics metrics;
};

/// Mean of per-seed mean_abs_diff over cells that matched at least one pair.
inline std::optional<Rational> aggregate_mean_abs_diff(
  const std::vector<CompareCell>& cells)
{
  Rational sum = 0;
  int counted = 0;
  for (const CompareCell& cell : cells) {
    if (!cell.metrics.mean_abs_diff) continue;
    sum += *cell.metrics.mean_abs_diff;
    ++counted;
  }
  if (counted == 0) return std::nullopt;
  return sum / counted;
}

/// Cells must already be ordered by (mechanism name, seed).
inline Json compare_report(const Instance& instance,
                           const std::vector<std::uint64_t>& seeds,
                           const Allocation& offline,
                           const std::vector<CompareCell>& cells)
{
  Json runs = Json::array();
  for (const CompareCell& cell : cells) {
    Json entry;
    entry["mechanism"] = std::string(mechanism_name(cell.mechanism));
    entry["seed"] = cell.seed;
    entry["metrics"] = metrics_json(cell.metrics);
    runs.push_back(std::move(entry));
  }

  Json aggregates = Json::array();
  for (MechanismId mechanism : kMechanismsByName) {
    std::vector<CompareCell> of_mechanism;
    for (const CompareCell& cell : cells)
      if (cell.mechanism == mechanism) of_mechanism.push_back(cell);
    Json entry;
    entry["mechanism"] = std::string(mechanism_name(mechanism));
    const auto mean = aggregate_mean_abs_diff(of_mechanism);
    entry["mean_of_mean_abs_diff"] = optional_rational_json(mean);
    int counted = 0;
    for (const CompareCell& cell : of_mechanism)
      if (cell.metrics.matched_count > 0) ++counted;
    entry["seeds_with_matches"] = counted;
    aggregates.push_back(std::move(entry));
  }

  Json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "compare";
  out["seeds"] = seeds;
  out["instance"] = instance_summary_json(instance);
  out["offline"] = offline_json(offline);
  out["runs"] = std::move(runs);
  out["aggregates"] = std::move(aggregates);
  return out;
}

inline Json misreport_json(const std::string& patient_id,
                           const std::optional<MisreportFinding>& finding)
{
  Json out;
  out["patient"] = patient_id;
  out["found"] = finding.has_value();
  if (finding) {
    out["true_epts"] = finding->true_epts;
    out["reported_epts"] = finding->reported_epts;
    out["truthful_kdpi"] =
      finding->truthful_kdpi ? Json(*finding->truthful_kdpi) : Json(nullptr);
    out["misreport_kdpi"] =
      finding->misreport_kdpi ? Json(*finding->misreport_kdpi) : Json(nullptr);
    out["utility_gain"] = finding->utility_gain;
  }
  return out;
}

struct EfficiencyChecks
{
  bool swap_optimal = false;
  // Unset when the instance exceeds the exhaustive-check size bound.
  std::optional<bool> pareto_efficient;
};

inline Json efficiency_json(const EfficiencyChecks& checks)
{
  Json out;
  out["swap_optimal"] = checks.swap_optimal;
  out["pareto_efficient"] =
    checks.pareto_efficient ? Json(*checks.pareto_efficient) : Json(nullptr);
  return out;
}

inline Json axioms_report(const Instance& instance, MechanismId mechanism,
                          std::uint64_t seed, const Json& misreports,
                          const EfficiencyChecks& mechanism_checks,
                          const EfficiencyChecks& offline_checks)
{
  Json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "axioms";
  out["mechanism"] = std::string(mechanism_name(mechanism));
  out["seed"] = seed;
  out["instance"] = instance_summary_json(instance);
  out["misreports"] = misreports;
  Json efficiency;
  efficiency["mechanism_allocation"] = efficiency_json(mechanism_checks);
  efficiency["offline_allocation"] = efficiency_json(offline_checks);
  out["efficiency"] = std::move(efficiency);
  return out;
}

/// Canonical byte rendering of a report.
inline std::string render_report(const Json& report)
{
  return report.dump(2) + "\n";
}

}  // namespace organmatch
