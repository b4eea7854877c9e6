/*
 *   Copyright 2026 The isolab Authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

// Batch driver: one subcommand per experiment, plus `list` and `acceptance`.
// Exit status 0 iff every bound check of the run passes; 2 on bad input.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "isolab/acceptance.hpp"
#include "isolab/experiments.hpp"

namespace fs = std::filesystem;
using namespace isolab;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_outcome(const ExperimentOutcome& outcome, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / (outcome.experiment + ".csv"), outcome.aggregate_csv());
  for (const auto& [stem, table] : outcome.trial_tables) write_file(dir / (stem + ".csv"), table.str());
  nlohmann::json summary = outcome.summary;
  summary["experiment"] = outcome.experiment;
  summary["pass"] = outcome.pass();
  if (summary.contains("first_report")) {
    write_file(dir / (outcome.experiment + "_report.json"), summary["first_report"].dump(2) + "\n");
    summary.erase("first_report");
  }
  write_file(dir / (outcome.experiment + ".json"), summary.dump(2) + "\n");
}

struct Subcommand {
  const ExperimentSpec* spec;
  CLI::App* app;
  std::map<std::string, std::string> values;
  std::string config;
  std::string out;
};

void print_catalog() {
  for (const auto& spec : experiment_catalog()) {
    std::cout << spec.name << (spec.randomized ? " [seeded]" : "") << "\n  " << spec.summary << '\n';
    for (const auto& p : spec.params)
      std::cout << "    --" << p.name << " (default: " << (p.default_value.empty() ? "none" : p.default_value)
                << ")  " << p.help << '\n';
  }
  std::cout << "acceptance\n  run one acceptance criterion\n    --criterion (1..14)\n";
}

int run_subcommand(Subcommand& sub) {
  Params given;
  if (!sub.config.empty()) {
    std::ifstream in(sub.config);
    if (!in) throw ConfigError("config", "cannot open '" + sub.config + "'");
    given = parse_config(in);
    if (given.has("out")) {
      if (sub.out.empty()) sub.out = given.text("out");
      Params rest;
      for (const auto& [k, v] : given.values())
        if (k != "out") rest.set(k, v);
      given = rest;
    }
  }
  for (const auto& [key, value] : sub.values)
    if (sub.app->count("--" + key)) given.set(key, value);
  const ExperimentOutcome outcome = run_experiment(*sub.spec, given);
  std::cout << outcome.aggregate_csv();
  if (!sub.out.empty()) write_outcome(outcome, sub.out);
  return outcome.pass() ? 0 : kExitFail;
}

int run_acceptance(unsigned criterion, const std::string& out) {
  std::map<unsigned, CriterionResult> results;
  if (criterion == kCriterionCount) {
    for (unsigned id = 1; id < kCriterionCount; ++id)
      if (criterion_is_randomized(id)) results.emplace(id, run_criterion(id));
    const CriterionResult r = run_reproducibility(results);
    std::cout << format_criterion_line(r) << '\n';
    return r.pass ? 0 : kExitFail;
  }
  const CriterionResult r = run_criterion(criterion);
  std::cout << format_criterion_line(r) << '\n';
  if (!out.empty()) {
    fs::create_directories(out);
    write_file(fs::path(out) / ("criterion" + std::to_string(criterion) + ".csv"), r.csv);
  }
  return r.pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isolab: witness isolation and spectral experiments"};
  app.require_subcommand(1);

  std::vector<Subcommand> subs;
  subs.reserve(experiment_catalog().size());
  for (const auto& spec : experiment_catalog()) {
    subs.push_back({&spec, nullptr, {}, {}, {}});
    Subcommand& sub = subs.back();
    sub.app = app.add_subcommand(spec.name, spec.summary);
    for (const auto& p : spec.params) {
      sub.values[p.name] = p.default_value;
      std::string help = p.help;
      if (!p.default_value.empty()) help += " [default: " + p.default_value + "]";
      sub.app->add_option("--" + p.name, sub.values[p.name], help);
    }
    sub.app->add_option("--config", sub.config, "file of key=value lines; flags override it");
    sub.app->add_option("--out", sub.out, "directory for CSV and JSON outputs");
  }

  auto* list = app.add_subcommand("list", "list experiments and their parameters");
  unsigned criterion = 0;
  std::string acceptance_out;
  auto* acceptance = app.add_subcommand("acceptance", "run one acceptance criterion");
  acceptance->add_option("--criterion", criterion, "criterion number")->required()->check(CLI::Range(1U, kCriterionCount));
  acceptance->add_option("--out", acceptance_out, "directory for the criterion CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      print_catalog();
      return 0;
    }
    if (acceptance->parsed()) return run_acceptance(criterion, acceptance_out);
    for (auto& sub : subs)
      if (sub.app->parsed()) return run_subcommand(sub);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}
