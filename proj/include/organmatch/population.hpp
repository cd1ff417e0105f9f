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

// Patients, organs and instances; CSV ingestion; synthetic cohort generation.
//
// CSV formats (strict):
//   patients: header exactly "id,arrival_day,epts",  rows "<id>,<day>,<epts>"
//   organs:   header exactly "id,arrival_day,kdpi",  rows "<id>,<day>,<kdpi>"
// ids match [A-Za-z0-9_-]+, days are non-negative integers, scores 0..100.
//
// Generation draws from labelled substreams of the master seed (see
// derive_stream): "donor_age", "donor_diabetes", "recipient_age",
// "recipient_diabetes", "recipient_dialysis", "organ_arrival",
// "patient_arrival". Ages are normal draws clamped to the configured range;
// diabetes is a Bernoulli draw; dialysis years are exponential; arrival days
// are uniform over the horizon. Scores are percentile ranks within the
// generated cohort itself.

#include "organmatch/errors.hpp"
#include "organmatch/rng.hpp"
#include "organmatch/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace organmatch {

struct Patient
{
  std::string id;
  int arrival_day = 0;
  int epts = 0;

  friend bool operator==(const Patient&, const Patient&) = default;
};

struct Organ
{
  std::string id;
  int arrival_day = 0;
  int kdpi = 0;

  friend bool operator==(const Organ&, const Organ&) = default;
};

/// Time-ordered collections of patients and organs. A valid instance has
/// both lists sorted by (arrival_day, id), unique ids per list and all
/// scores in 0..100; validate_instance establishes that.
struct Instance
{
  std::vector<Patient> patients;
  std::vector<Organ> organs;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Parameters of a synthetic scenario. Presets pin the donor-age statistics
/// of the 1989 and 2014 donor pools; everything else is a documented default.
struct ScenarioConfig
{
  std::string preset = "custom";
  int patient_count = 0;
  int organ_count = 0;
  int horizon_days = 365;

  double donor_age_mean = 40.0;
  double donor_age_sd = 12.0;
  double donor_age_min = 18.0;
  double donor_age_max = 80.0;

  double recipient_age_mean = 50.0;
  double recipient_age_sd = 15.0;
  double recipient_age_min = 18.0;
  double recipient_age_max = 85.0;

  double diabetes_prevalence = 0.25;
  double dialysis_years_mean = 3.0;

  ScoringWeights weights;
};

/// era1989: donor pool with mean age 32 and an age-69 cap.
/// era2014: donor pool with mean age 46 and an age-80 cap.
/// custom:  the defaults above, meant to be overridden via configuration.
inline ScenarioConfig scenario_preset(std::string_view name)
{
  ScenarioConfig cfg;
  cfg.preset = std::string(name);
  if (name == "era1989") {
    cfg.donor_age_mean = 32.0;
    cfg.donor_age_max = 69.0;
  } else if (name == "era2014") {
    cfg.donor_age_mean = 46.0;
    cfg.donor_age_max = 80.0;
  } else if (name != "custom") {
    throw ValidationError("unknown scenario preset: " + std::string(name) +
                          " (expected era1989, era2014 or custom)");
  }
  return cfg;
}

inline void validate_config(const ScenarioConfig& cfg)
{
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("scenario config: ") + what);
  };
  require(cfg.patient_count >= 0, "patient_count must be >= 0");
  require(cfg.organ_count >= 0, "organ_count must be >= 0");
  require(cfg.horizon_days >= 1, "horizon_days must be >= 1");
  require(cfg.donor_age_sd >= 0.0, "donor_age_sd must be >= 0");
  require(cfg.recipient_age_sd >= 0.0, "recipient_age_sd must be >= 0");
  require(cfg.donor_age_min >= 0.0 && cfg.donor_age_max <= 130.0 &&
            cfg.donor_age_min <= cfg.donor_age_max,
          "donor age range must satisfy 0 <= min <= max <= 130");
  require(cfg.recipient_age_min >= 0.0 && cfg.recipient_age_max <= 130.0 &&
            cfg.recipient_age_min <= cfg.recipient_age_max,
          "recipient age range must satisfy 0 <= min <= max <= 130");
  require(cfg.diabetes_prevalence >= 0.0 && cfg.diabetes_prevalence <= 1.0,
          "diabetes_prevalence must be in [0, 1]");
  require(cfg.dialysis_years_mean >= 0.0, "dialysis_years_mean must be >= 0");
}

inline bool valid_id(std::string_view id)
{
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

namespace detail {

inline int parse_int_field(std::string_view field, int line,
                           const std::string& what)
{
  long long value = 0;
  const auto [ptr, ec] =
    std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(line, what + " is not an integer: '" +
                             std::string(field) + "'");
  if (value < -1000000000LL || value > 1000000000LL)
    throw ParseError(line, what + " out of range: '" + std::string(field) + "'");
  return static_cast<int>(value);
}

// Shared row walker for the two CSV schemas. emit(id, day, score, line).
template <typename Emit>
void parse_rows(std::string_view text, std::string_view header,
                std::string_view score_name, Emit emit)
{
  int line_no = 0;
  std::size_t pos = 0;
  std::unordered_set<std::string> seen;
  bool saw_header = false;

  while (pos <= text.size()) {
    if (pos == text.size() && saw_header) break;
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                              ? text.substr(pos)
                              : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!saw_header) {
      if (line != header)
        throw ParseError(line_no, "expected header '" + std::string(header) +
                                    "', got '" + std::string(line) + "'");
      saw_header = true;
      continue;
    }
    if (line.empty()) {
      // Only a trailing newline may leave an empty fragment.
      if (pos <= text.size())
        throw ParseError(line_no, "empty line");
      break;
    }

    std::size_t c1 = line.find(',');
    std::size_t c2 = (c1 == std::string_view::npos)
                       ? std::string_view::npos
                       : line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        line.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError(line_no, "expected 3 comma-separated fields");

    std::string_view id = line.substr(0, c1);
    std::string_view day_field = line.substr(c1 + 1, c2 - c1 - 1);
    std::string_view score_field = line.substr(c2 + 1);

    if (!valid_id(id))
      throw ParseError(line_no, "invalid id '" + std::string(id) +
                                  "' (must match [A-Za-z0-9_-]+)");
    if (!seen.insert(std::string(id)).second)
      throw ParseError(line_no, "duplicate id '" + std::string(id) + "'");

    int day = parse_int_field(day_field, line_no, "arrival_day");
    if (day < 0)
      throw ParseError(line_no, "arrival_day must be non-negative, got " +
                                  std::string(day_field));
    int score = parse_int_field(score_field, line_no, std::string(score_name));
    if (score < 0 || score > 100)
      throw ParseError(line_no, std::string(score_name) +
                                  " must be in [0, 100], got " +
                                  std::string(score_field));
    emit(std::string(id), day, score, line_no);
  }
  if (!saw_header)
    throw ParseError(1, "expected header '" + std::string(header) +
                          "', got empty input");
}

}  // namespace detail

inline std::vector<Patient> parse_patients(std::string_view text)
{
  std::vector<Patient> out;
  detail::parse_rows(text, "id,arrival_day,epts", "epts",
                     [&](std::string id, int day, int score, int) {
                       out.push_back(Patient{std::move(id), day, score});
                     });
  return out;
}

inline std::vector<Organ> parse_organs(std::string_view text)
{
  std::vector<Organ> out;
  detail::parse_rows(text, "id,arrival_day,kdpi", "kdpi",
                     [&](std::string id, int day, int score, int) {
                       out.push_back(Organ{std::move(id), day, score});
                     });
  return out;
}

inline std::string serialize_patients(std::span<const Patient> patients)
{
  std::string out = "id,arrival_day,epts\n";
  for (const Patient& p : patients) {
    out += p.id;
    out += ',';
    out += std::to_string(p.arrival_day);
    out += ',';
    out += std::to_string(p.epts);
    out += '\n';
  }
  return out;
}

inline std::string serialize_organs(std::span<const Organ> organs)
{
  std::string out = "id,arrival_day,kdpi\n";
  for (const Organ& o : organs) {
    out += o.id;
    out += ',';
    out += std::to_string(o.arrival_day);
    out += ',';
    out += std::to_string(o.kdpi);
    out += '\n';
  }
  return out;
}

/// Sorts both lists by (arrival_day, id) and checks ranges and id
/// uniqueness. Idempotent. Throws ValidationError on violations.
inline Instance validate_instance(Instance instance)
{
  auto check_list = [](auto& entries, const char* kind, auto score_of) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) {
                       if (a.arrival_day != b.arrival_day)
                         return a.arrival_day < b.arrival_day;
                       return a.id < b.id;
                     });
    std::unordered_set<std::string_view> ids;
    for (const auto& e : entries) {
      if (e.arrival_day < 0)
        throw ValidationError(std::string(kind) + " '" + e.id +
                              "': negative arrival day");
      const int score = score_of(e);
      if (score < 0 || score > 100)
        throw ValidationError(std::string(kind) + " '" + e.id +
                              "': score " + std::to_string(score) +
                              " outside [0, 100]");
      if (!ids.insert(e.id).second)
        throw ValidationError(std::string(kind) + ": duplicate id '" + e.id +
                              "'");
    }
  };
  check_list(instance.patients, "patient",
             [](const Patient& p) { return p.epts; });
  check_list(instance.organs, "organ", [](const Organ& o) { return o.kdpi; });
  return instance;
}

struct CohortProfiles
{
  std::vector<DonorProfile> donors;
  std::vector<RecipientProfile> recipients;
};

/// Draws the raw donor/recipient profiles for a scenario. Deterministic in
/// (config, seed); exposed separately so cohort statistics can be inspected
/// without converting to scores.
inline CohortProfiles draw_profiles(const ScenarioConfig& cfg,
                                    std::uint64_t seed)
{
  validate_config(cfg);
  CohortProfiles out;
  out.donors.reserve(cfg.organ_count);
  out.recipients.reserve(cfg.patient_count);

  RngStream donor_age = derive_stream(seed, "donor_age");
  RngStream donor_diabetes = derive_stream(seed, "donor_diabetes");
  for (int i = 0; i < cfg.organ_count; ++i) {
    double age = std::clamp(donor_age.next_normal(cfg.donor_age_mean,
                                                  cfg.donor_age_sd),
                            cfg.donor_age_min, cfg.donor_age_max);
    out.donors.emplace_back(age,
                            donor_diabetes.next_bernoulli(cfg.diabetes_prevalence));
  }

  RngStream recipient_age = derive_stream(seed, "recipient_age");
  RngStream recipient_diabetes = derive_stream(seed, "recipient_diabetes");
  RngStream dialysis = derive_stream(seed, "recipient_dialysis");
  for (int i = 0; i < cfg.patient_count; ++i) {
    double age = std::clamp(recipient_age.next_normal(cfg.recipient_age_mean,
                                                      cfg.recipient_age_sd),
                            cfg.recipient_age_min, cfg.recipient_age_max);
    out.recipients.emplace_back(
      age, recipient_diabetes.next_bernoulli(cfg.diabetes_prevalence),
      dialysis.next_exponential(cfg.dialysis_years_mean));
  }
  return out;
}

namespace detail {

inline std::string padded_id(char prefix, int index, int count)
{
  int width = 1;
  for (int v = count; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  std::string id(1, prefix);
  id.append(width - digits.size(), '0');
  id += digits;
  return id;
}

}  // namespace detail

/// Synthesizes a full instance: profiles -> raw risks -> percentile scores
/// against the generated cohort itself -> uniform arrival days. Pure in
/// (config, seed).
inline Instance generate_instance(const ScenarioConfig& cfg, std::uint64_t seed)
{
  CohortProfiles profiles = draw_profiles(cfg, seed);

  std::vector<RawRisk> donor_risks;
  donor_risks.reserve(profiles.donors.size());
  for (const DonorProfile& d : profiles.donors)
    donor_risks.push_back(raw_donor_risk(d, cfg.weights));

  std::vector<RawRisk> recipient_risks;
  recipient_risks.reserve(profiles.recipients.size());
  for (const RecipientProfile& r : profiles.recipients)
    recipient_risks.push_back(raw_recipient_risk(r, cfg.weights));

  Instance instance;
  RngStream organ_arrival = derive_stream(seed, "organ_arrival");
  for (int i = 0; i < cfg.organ_count; ++i) {
    Organ organ;
    organ.id = detail::padded_id('o', i + 1, cfg.organ_count);
    organ.arrival_day = static_cast<int>(
      organ_arrival.next_below(static_cast<std::uint64_t>(cfg.horizon_days)));
    organ.kdpi = percentile_score(donor_risks[i], donor_risks);
    instance.organs.push_back(std::move(organ));
  }

  RngStream patient_arrival = derive_stream(seed, "patient_arrival");
  for (int i = 0; i < cfg.patient_count; ++i) {
    Patient patient;
    patient.id = detail::padded_id('p', i + 1, cfg.patient_count);
    patient.arrival_day = static_cast<int>(
      patient_arrival.next_below(static_cast<std::uint64_t>(cfg.horizon_days)));
    patient.epts = percentile_score(recipient_risks[i], recipient_risks);
    instance.patients.push_back(std::move(patient));
  }

  return validate_instance(std::move(instance));
}

}  // namespace organmatch
