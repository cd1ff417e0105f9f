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

#include "organmatch/population.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <tuple>

using organmatch::Instance;
using organmatch::Organ;
using organmatch::ParseError;
using organmatch::parse_organs;
using organmatch::parse_patients;
using organmatch::Patient;
using organmatch::ScenarioConfig;
using organmatch::ValidationError;

TEST_CASE("parse a single patient row")
{
  const auto patients = parse_patients("id,arrival_day,epts\np1,0,55\n");
  REQUIRE(patients.size() == 1);
  CHECK(patients[0] == Patient{"p1", 0, 55});
}

TEST_CASE("parse a single organ row")
{
  const auto organs = parse_organs("id,arrival_day,kdpi\no1,1,40\n");
  REQUIRE(organs.size() == 1);
  CHECK(organs[0] == Organ{"o1", 1, 40});
}

TEST_CASE("header only yields an empty list")
{
  CHECK(parse_organs("id,arrival_day,kdpi\n").empty());
  CHECK(parse_patients("id,arrival_day,epts\n").empty());
}

TEST_CASE("missing trailing newline is tolerated")
{
  CHECK(parse_patients("id,arrival_day,epts\np1,0,55").size() == 1);
}

TEST_CASE("parse errors carry line numbers")
{
  auto line_of = [](auto fn) {
    try {
      fn();
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };

  // Wrong header.
  CHECK(line_of([] { parse_patients("id,day,epts\n"); }) == 1);
  CHECK(line_of([] { parse_patients(""); }) == 1);
  // Score out of range.
  CHECK(line_of([] {
          parse_patients("id,arrival_day,epts\np1,0,55\np2,3,101\n");
        }) == 3);
  // Negative day.
  CHECK(line_of([] { parse_organs("id,arrival_day,kdpi\no2,-1,40\n"); }) == 2);
  // Duplicate id.
  CHECK(line_of([] {
          parse_patients("id,arrival_day,epts\np1,0,55\np1,1,60\n");
        }) == 3);
  // Non-integer field.
  CHECK(line_of([] { parse_patients("id,arrival_day,epts\np1,zero,55\n"); }) ==
        2);
  // Bad id characters.
  CHECK(line_of([] { parse_patients("id,arrival_day,epts\np 1,0,55\n"); }) ==
        2);
  // Wrong field count.
  CHECK(line_of([] { parse_patients("id,arrival_day,epts\np1,0\n"); }) == 2);
  CHECK(line_of([] { parse_patients("id,arrival_day,epts\np1,0,5,9\n"); }) ==
        2);
  // Interior empty line.
  CHECK(line_of([] {
          parse_patients("id,arrival_day,epts\n\np1,0,55\n");
        }) == 2);
}

TEST_CASE("serialize then parse is the identity on valid instances")
{
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Instance instance = testutil::random_instance(seed, 20, 20);
    CHECK(parse_patients(organmatch::serialize_patients(instance.patients)) ==
          instance.patients);
    CHECK(parse_organs(organmatch::serialize_organs(instance.organs)) ==
          instance.organs);
  }
}

TEST_CASE("serialized bytes are exactly the documented format")
{
  const std::vector<Patient> patients = {{"p1", 0, 55}, {"p2", 3, 7}};
  CHECK(organmatch::serialize_patients(patients) ==
        "id,arrival_day,epts\np1,0,55\np2,3,7\n");
}

TEST_CASE("validate_instance sorts by (arrival_day, id) and is idempotent")
{
  Instance instance;
  instance.organs.push_back(Organ{"o2", 5, 10});
  instance.organs.push_back(Organ{"o1", 5, 20});
  instance.organs.push_back(Organ{"o3", 1, 30});
  instance.patients.push_back(Patient{"p1", 2, 40});
  instance.patients.push_back(Patient{"p0", 0, 50});

  const Instance sorted = organmatch::validate_instance(instance);
  REQUIRE(sorted.organs.size() == 3);
  CHECK(sorted.organs[0].id == "o3");
  CHECK(sorted.organs[1].id == "o1");
  CHECK(sorted.organs[2].id == "o2");
  CHECK(sorted.patients[0].id == "p0");
  CHECK(organmatch::validate_instance(sorted) == sorted);
}

TEST_CASE("validate_instance rejects bad scores and duplicate ids")
{
  Instance bad_score;
  bad_score.organs.push_back(Organ{"o1", 0, 150});
  CHECK_THROWS_AS(organmatch::validate_instance(bad_score), ValidationError);

  Instance duplicate;
  duplicate.patients.push_back(Patient{"p1", 0, 10});
  duplicate.patients.push_back(Patient{"p1", 1, 20});
  CHECK_THROWS_AS(organmatch::validate_instance(duplicate), ValidationError);

  Instance negative_day;
  negative_day.patients.push_back(Patient{"p1", -1, 10});
  CHECK_THROWS_AS(organmatch::validate_instance(negative_day),
                  ValidationError);
}

TEST_CASE("generation is a pure function of (config, seed)")
{
  ScenarioConfig cfg = organmatch::scenario_preset("era2014");
  cfg.patient_count = 40;
  cfg.organ_count = 30;
  cfg.horizon_days = 100;
  const Instance first = organmatch::generate_instance(cfg, 99);
  const Instance second = organmatch::generate_instance(cfg, 99);
  CHECK(first == second);
  const Instance other_seed = organmatch::generate_instance(cfg, 100);
  CHECK(first != other_seed);
}

TEST_CASE("generated instances respect ranges")
{
  ScenarioConfig cfg = organmatch::scenario_preset("era1989");
  cfg.patient_count = 500;
  cfg.organ_count = 500;
  cfg.horizon_days = 365;
  const Instance instance = organmatch::generate_instance(cfg, 4);
  CHECK(instance.patients.size() == 500);
  CHECK(instance.organs.size() == 500);
  for (const Organ& o : instance.organs) {
    CHECK(o.kdpi >= 0);
    CHECK(o.kdpi <= 100);
    CHECK(o.arrival_day >= 0);
    CHECK(o.arrival_day < 365);
  }
  const organmatch::CohortProfiles profiles = organmatch::draw_profiles(cfg, 4);
  for (const organmatch::DonorProfile& d : profiles.donors) {
    CHECK(d.age() >= cfg.donor_age_min);
    CHECK(d.age() <= cfg.donor_age_max);
  }
}

TEST_CASE("era presets match their donor-age statistics")
{
  for (const auto& [name, mean, max_age] :
       {std::tuple{"era1989", 32.0, 69.0}, std::tuple{"era2014", 46.0, 80.0}}) {
    ScenarioConfig cfg = organmatch::scenario_preset(name);
    CHECK(cfg.donor_age_mean == mean);
    CHECK(cfg.donor_age_max == max_age);
    cfg.organ_count = 4000;
    const auto profiles = organmatch::draw_profiles(cfg, 11);
    double sum = 0.0;
    double highest = 0.0;
    for (const organmatch::DonorProfile& d : profiles.donors) {
      sum += d.age();
      highest = std::max(highest, d.age());
    }
    CHECK(sum / 4000.0 == Catch::Approx(mean).margin(1.0));
    CHECK(highest <= max_age);
  }
}

TEST_CASE("zero counts produce empty lists")
{
  ScenarioConfig cfg = organmatch::scenario_preset("era2014");
  cfg.patient_count = 0;
  cfg.organ_count = 3;
  const Instance instance = organmatch::generate_instance(cfg, 1);
  CHECK(instance.patients.empty());
  CHECK(instance.organs.size() == 3);
}

TEST_CASE("unknown preset and invalid configs are rejected")
{
  CHECK_THROWS_AS(organmatch::scenario_preset("era3000"), ValidationError);

  ScenarioConfig cfg = organmatch::scenario_preset("custom");
  cfg.horizon_days = 0;
  CHECK_THROWS_AS(organmatch::validate_config(cfg), ValidationError);
  cfg = organmatch::scenario_preset("custom");
  cfg.diabetes_prevalence = 1.5;
  CHECK_THROWS_AS(organmatch::validate_config(cfg), ValidationError);
  cfg = organmatch::scenario_preset("custom");
  cfg.donor_age_min = 50;
  cfg.donor_age_max = 40;
  CHECK_THROWS_AS(organmatch::validate_config(cfg), ValidationError);
}

TEST_CASE("generated ids are zero-padded and csv-safe")
{
  ScenarioConfig cfg = organmatch::scenario_preset("custom");
  cfg.patient_count = 12;
  cfg.organ_count = 101;
  const Instance instance = organmatch::generate_instance(cfg, 5);
  for (const Patient& p : instance.patients) {
    CHECK(p.id.size() == 3);  // 'p' + 2 digits
    CHECK(organmatch::valid_id(p.id));
  }
  for (const Organ& o : instance.organs) CHECK(o.id.size() == 4);
}
