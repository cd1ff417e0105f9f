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

// organmatch command line. Subcommands: generate, run, compare, axioms.
// Exit codes: 0 success, 1 input error, 2 usage error. Reports go to files,
// diagnostics to stderr (gated by ORGANMATCH_LOG), so output never mixes.

#include "organmatch/axioms.hpp"
#include "organmatch/mechanisms.hpp"
#include "organmatch/offline_oracle.hpp"
#include "organmatch/population.hpp"
#include "organmatch/report.hpp"
#include "organmatch/simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum class LogLevel
{
  quiet = 0,
  info = 1,
  debug = 2,
};

LogLevel log_level()
{
  const char* env = std::getenv("ORGANMATCH_LOG");
  if (env == nullptr) return LogLevel::quiet;
  const std::string value(env);
  if (value == "debug") return LogLevel::debug;
  if (value == "info") return LogLevel::info;
  return LogLevel::quiet;
}

void log_info(const std::string& message)
{
  if (log_level() >= LogLevel::info) std::cerr << "[info] " << message << "\n";
}

void log_debug(const std::string& message)
{
  if (log_level() >= LogLevel::debug)
    std::cerr << "[debug] " << message << "\n";
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw organmatch::Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw organmatch::Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw organmatch::Error("failed writing '" + path + "'");
  log_debug("wrote " + path + " (" + std::to_string(content.size()) +
            " bytes)");
}

organmatch::Instance load_instance(const std::string& patients_path,
                                   const std::string& organs_path)
{
  organmatch::Instance instance;
  try {
    instance.patients = organmatch::parse_patients(read_file(patients_path));
  } catch (const organmatch::ParseError& e) {
    throw organmatch::Error(patients_path + ": " + e.what());
  }
  try {
    instance.organs = organmatch::parse_organs(read_file(organs_path));
  } catch (const organmatch::ParseError& e) {
    throw organmatch::Error(organs_path + ": " + e.what());
  }
  instance = organmatch::validate_instance(std::move(instance));
  log_info("loaded " + std::to_string(instance.patients.size()) +
           " patients, " + std::to_string(instance.organs.size()) + " organs");
  return instance;
}

double number_field(const nlohmann::json& object, const std::string& key)
{
  const auto& value = object.at(key);
  if (!value.is_number())
    throw organmatch::Error("config: '" + key + "' must be a number");
  return value.get<double>();
}

void apply_config_file(organmatch::ScenarioConfig& cfg,
                       const std::string& path)
{
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw organmatch::Error(path + ": " + e.what());
  }
  if (!config.is_object())
    throw organmatch::Error(path + ": config must be a JSON object");

  for (const auto& [section, body] : config.items()) {
    if (section == "scenario") {
      for (const auto& [key, unused] : body.items()) {
        if (key == "donor_age_mean") cfg.donor_age_mean = number_field(body, key);
        else if (key == "donor_age_sd") cfg.donor_age_sd = number_field(body, key);
        else if (key == "donor_age_min") cfg.donor_age_min = number_field(body, key);
        else if (key == "donor_age_max") cfg.donor_age_max = number_field(body, key);
        else if (key == "recipient_age_mean") cfg.recipient_age_mean = number_field(body, key);
        else if (key == "recipient_age_sd") cfg.recipient_age_sd = number_field(body, key);
        else if (key == "recipient_age_min") cfg.recipient_age_min = number_field(body, key);
        else if (key == "recipient_age_max") cfg.recipient_age_max = number_field(body, key);
        else if (key == "diabetes_prevalence") cfg.diabetes_prevalence = number_field(body, key);
        else if (key == "dialysis_years_mean") cfg.dialysis_years_mean = number_field(body, key);
        else throw organmatch::Error(path + ": unknown scenario key '" + key + "'");
      }
    } else if (section == "scoring_weights") {
      for (const auto& [key, unused] : body.items()) {
        if (key == "donor_diabetes") cfg.weights.donor_diabetes = number_field(body, key);
        else if (key == "recipient_diabetes") cfg.weights.recipient_diabetes = number_field(body, key);
        else if (key == "dialysis_per_year") cfg.weights.dialysis_per_year = number_field(body, key);
        else throw organmatch::Error(path + ": unknown scoring_weights key '" + key + "'");
      }
    } else {
      throw organmatch::Error(path + ": unknown config section '" + section +
                              "'");
    }
  }
}

std::string ratio_text(const organmatch::CompetitiveRatio& ratio)
{
  switch (ratio.kind) {
    case organmatch::CompetitiveRatio::Kind::finite:
      return organmatch::fraction_string(ratio.value);
    case organmatch::CompetitiveRatio::Kind::infinite: return "inf";
    case organmatch::CompetitiveRatio::Kind::undefined: return "undefined";
  }
  return "undefined";
}

struct GenerateOptions
{
  std::string preset;
  int patients = 0;
  int organs = 0;
  int horizon = 365;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string config_path;
};

int cmd_generate(const GenerateOptions& options)
{
  organmatch::ScenarioConfig cfg = organmatch::scenario_preset(options.preset);
  if (!options.config_path.empty()) apply_config_file(cfg, options.config_path);
  cfg.patient_count = options.patients;
  cfg.organ_count = options.organs;
  cfg.horizon_days = options.horizon;

  const organmatch::Instance instance =
    organmatch::generate_instance(cfg, options.seed);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec)
    throw organmatch::Error("cannot create directory '" + options.out_dir +
                            "': " + ec.message());
  const std::string patients_path =
    (fs::path(options.out_dir) / "patients.csv").string();
  const std::string organs_path =
    (fs::path(options.out_dir) / "organs.csv").string();
  write_file(patients_path, organmatch::serialize_patients(instance.patients));
  write_file(organs_path, organmatch::serialize_organs(instance.organs));

  std::cout << "generate preset=" << cfg.preset
            << " patients=" << instance.patients.size()
            << " organs=" << instance.organs.size() << " seed=" << options.seed
            << " out=" << options.out_dir << "\n";
  return 0;
}

struct RunOptions
{
  std::string mechanism;
  std::string patients_path;
  std::string organs_path;
  std::uint64_t seed = 0;
  std::string report_path;
};

int cmd_run(const RunOptions& options)
{
  const organmatch::MechanismId mechanism =
    *organmatch::parse_mechanism(options.mechanism);
  const organmatch::Instance instance =
    load_instance(options.patients_path, options.organs_path);

  const organmatch::Trace trace =
    organmatch::run_simulation(instance, mechanism, options.seed);
  const organmatch::Allocation offline = organmatch::optimal_offline(instance);
  const organmatch::Metrics metrics =
    organmatch::compute_metrics(trace, offline);

  const organmatch::Json report = organmatch::run_report(
    instance, mechanism, options.seed, trace, offline, metrics);
  write_file(options.report_path, organmatch::render_report(report));

  std::cout << "run mechanism=" << options.mechanism << " seed=" << options.seed
            << " matched=" << metrics.matched_count
            << " wasted=" << metrics.wasted_count
            << " total_cost=" << metrics.total_cost
            << " offline_cost=" << offline.total_cost
            << " competitive_ratio=" << ratio_text(metrics.competitive_ratio)
            << "\n";
  return 0;
}

struct CompareOptions
{
  std::string patients_path;
  std::string organs_path;
  std::vector<std::uint64_t> seeds;
  std::string report_path;
};

int cmd_compare(const CompareOptions& options)
{
  const organmatch::Instance instance =
    load_instance(options.patients_path, options.organs_path);
  const organmatch::Allocation offline = organmatch::optimal_offline(instance);

  std::vector<std::uint64_t> seeds = options.seeds;
  std::sort(seeds.begin(), seeds.end());

  std::vector<organmatch::CompareCell> cells;
  for (organmatch::MechanismId mechanism : organmatch::kMechanismsByName) {
    for (std::uint64_t seed : seeds) {
      const organmatch::Trace trace =
        organmatch::run_simulation(instance, mechanism, seed);
      cells.push_back(organmatch::CompareCell{
        mechanism, seed, organmatch::compute_metrics(trace, offline)});
      log_debug("compare cell " +
                std::string(organmatch::mechanism_name(mechanism)) + "/" +
                std::to_string(seed) + " done");
    }
  }

  const organmatch::Json report =
    organmatch::compare_report(instance, seeds, offline, cells);
  write_file(options.report_path, organmatch::render_report(report));

  std::cout << "compare mechanisms=" << organmatch::kMechanismsByName.size()
            << " seeds=" << seeds.size() << " report=" << options.report_path
            << "\n";
  return 0;
}

struct AxiomsOptions
{
  std::string mechanism;
  std::string patients_path;
  std::string organs_path;
  std::uint64_t seed = 0;
  std::string report_path;
};

organmatch::EfficiencyChecks run_efficiency_checks(
  const organmatch::Allocation& allocation,
  const organmatch::Instance& instance)
{
  organmatch::EfficiencyChecks checks;
  checks.swap_optimal =
    organmatch::check_pairwise_swap_optimality(allocation, instance);
  if (std::min(instance.organs.size(), instance.patients.size()) <= 8)
    checks.pareto_efficient =
      organmatch::check_pareto_efficiency(allocation, instance);
  return checks;
}

int cmd_axioms(const AxiomsOptions& options)
{
  const organmatch::MechanismId mechanism =
    *organmatch::parse_mechanism(options.mechanism);
  const organmatch::Instance instance =
    load_instance(options.patients_path, options.organs_path);

  const organmatch::Trace trace =
    organmatch::run_simulation(instance, mechanism, options.seed);
  const organmatch::Allocation offline = organmatch::optimal_offline(instance);

  organmatch::Json misreports = organmatch::Json::array();
  int findings = 0;
  for (const organmatch::Patient& patient : instance.patients) {
    const auto finding = organmatch::find_profitable_misreport(
      mechanism, instance, patient.id, options.seed);
    if (finding) ++findings;
    misreports.push_back(organmatch::misreport_json(patient.id, finding));
  }

  const organmatch::EfficiencyChecks mechanism_checks =
    run_efficiency_checks(trace.allocation, instance);
  const organmatch::EfficiencyChecks offline_checks =
    run_efficiency_checks(offline, instance);

  const organmatch::Json report =
    organmatch::axioms_report(instance, mechanism, options.seed, misreports,
                              mechanism_checks, offline_checks);
  write_file(options.report_path, organmatch::render_report(report));

  std::cout << "axioms mechanism=" << options.mechanism
            << " patients=" << instance.patients.size()
            << " profitable_misreports=" << findings
            << " report=" << options.report_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"organmatch: online organ allocation simulator"};
  app.require_subcommand(1);

  const std::vector<std::string> mechanism_names = {"fifo", "greedy", "rank",
                                                    "random"};

  GenerateOptions generate_options;
  CLI::App* generate = app.add_subcommand(
    "generate", "Generate a synthetic instance as patients.csv + organs.csv");
  generate
    ->add_option("--preset", generate_options.preset, "Scenario preset")
    ->required()
    ->check(CLI::IsMember({"era1989", "era2014", "custom"}));
  generate->add_option("--patients", generate_options.patients, "Patient count")
    ->required()
    ->check(CLI::NonNegativeNumber);
  generate->add_option("--organs", generate_options.organs, "Organ count")
    ->required()
    ->check(CLI::NonNegativeNumber);
  generate
    ->add_option("--horizon", generate_options.horizon,
                 "Horizon length in days")
    ->check(CLI::PositiveNumber);
  generate->add_option("--seed", generate_options.seed, "Master seed");
  generate->add_option("--out", generate_options.out_dir, "Output directory")
    ->required();
  generate->add_option("--config", generate_options.config_path,
                       "JSON config overriding scenario parameters and "
                       "scoring weights");

  RunOptions run_options;
  CLI::App* run = app.add_subcommand(
    "run", "Run one mechanism over an instance and write a JSON report");
  run->add_option("--mechanism", run_options.mechanism, "Mechanism name")
    ->required()
    ->check(CLI::IsMember(mechanism_names));
  run->add_option("--patients", run_options.patients_path, "patients.csv path")
    ->required();
  run->add_option("--organs", run_options.organs_path, "organs.csv path")
    ->required();
  run->add_option("--seed", run_options.seed, "Master seed");
  run->add_option("--report", run_options.report_path, "Report output path")
    ->required();

  CompareOptions compare_options;
  CLI::App* compare = app.add_subcommand(
    "compare",
    "Run every mechanism over an instance for each seed, plus the offline "
    "oracle, and write a combined report");
  compare
    ->add_option("--patients", compare_options.patients_path,
                 "patients.csv path")
    ->required();
  compare->add_option("--organs", compare_options.organs_path, "organs.csv path")
    ->required();
  compare->add_option("--seeds", compare_options.seeds, "Seeds (one or more)")
    ->required()
    ->delimiter(',');
  compare
    ->add_option("--report", compare_options.report_path, "Report output path")
    ->required();

  AxiomsOptions axioms_options;
  CLI::App* axioms = app.add_subcommand(
    "axioms",
    "Search EPTS misreports for every patient and check allocation "
    "efficiency");
  axioms->add_option("--mechanism", axioms_options.mechanism, "Mechanism name")
    ->required()
    ->check(CLI::IsMember(mechanism_names));
  axioms
    ->add_option("--patients", axioms_options.patients_path,
                 "patients.csv path")
    ->required();
  axioms->add_option("--organs", axioms_options.organs_path, "organs.csv path")
    ->required();
  axioms->add_option("--seed", axioms_options.seed, "Master seed");
  axioms->add_option("--report", axioms_options.report_path,
                     "Report output path")
    ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(generate_options);
    if (run->parsed()) return cmd_run(run_options);
    if (compare->parsed()) return cmd_compare(compare_options);
    if (axioms->parsed()) return cmd_axioms(axioms_options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
