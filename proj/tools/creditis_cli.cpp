// Copyright 2026 The creditis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Uses only the C interface of the library.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "creditis/creditis.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(creditis_status s) {
  switch (s) {
    case CREDITIS_OK:
      return kExitOk;
    case CREDITIS_E_NUMERICAL:
    case CREDITIS_E_DEGENERATE_PILOT:
      return kExitNumerical;
    case CREDITIS_E_INTERNAL:
      return 1;
    default:
      return kExitConfig;
  }
}

int report_error(creditis_status s) {
  std::cerr << "creditis-cli: " << creditis_status_name(s) << ": " << creditis_last_error()
            << "\n";
  return exit_code(s);
}

int emit(creditis_report* report, const std::string& cli_path, char delimiter) {
  char* text = nullptr;
  creditis_status s = creditis_report_format(report, delimiter, 1, &text);
  if (s != CREDITIS_OK) return report_error(s);
  std::string path = cli_path.empty() ? creditis_report_output_path(report) : cli_path;
  int rc = kExitOk;
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(path);
    out << text;
    if (!out) {
      std::cerr << "creditis-cli: cannot write '" << path << "'\n";
      rc = kExitConfig;
    }
  }
  creditis_string_free(text);
  return rc;
}

char delimiter_of(const std::string& format) { return format == "tsv" ? '\t' : ','; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Importance sampling for portfolio credit loss tails"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(creditis_version()));

  // run
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> b1;
  std::optional<std::uint64_t> b2;
  std::optional<int> threads;
  std::string mode;
  std::string out_path;
  std::string format;
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Seed override");
  run->add_option("--b1", b1, "Pilot size override")->check(CLI::PositiveNumber);
  run->add_option("--b2", b2, "Estimation size override")->check(CLI::PositiveNumber);
  run->add_option("--mode", mode, "crude, is or both")->check(CLI::IsMember({"crude", "is", "both"}));
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "Report path, '-' for stdout");
  run->add_option("--format", format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));

  // reproduce-table
  auto* table = app.add_subcommand("reproduce-table", "Rerun the experiment grid of a table");
  int table_id = 0;
  table->add_option("id", table_id, "Table id (1-10, 12)")->required();
  table->add_option("--seed", seed, "Seed override");
  table->add_option("--b1", b1, "Pilot size override")->check(CLI::PositiveNumber);
  table->add_option("--b2", b2, "Estimation size override")->check(CLI::PositiveNumber);
  table->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  table->add_option("--out", out_path, "Report path, '-' for stdout");
  table->add_option("--format", format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));

  // fft-check
  auto* fft = app.add_subcommand("fft-check", "Same as reproduce-table 4");
  fft->add_option("--out", out_path, "Report path, '-' for stdout");
  fft->add_option("--format", format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));

  // tilt-demo
  auto* demo = app.add_subcommand("tilt-demo", "Tilt one distribution family for an event");
  std::string family;
  std::string event;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> pilot;
  demo->add_option("--family", family, "normal, mvn2, gamma or mixture")->required();
  demo->add_option("--event", event, "x>A, sum>A, both>A, prod>A, inv>A or const")->required();
  demo->add_option("--samples", samples, "IS sample size")->check(CLI::PositiveNumber);
  demo->add_option("--pilot", pilot, "Pilot size for sampled conjugates")->check(CLI::PositiveNumber);
  demo->add_option("--seed", seed, "Seed");
  demo->add_option("--out", out_path, "Report path, '-' for stdout");
  demo->add_option("--format", format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  creditis_report* report = nullptr;
  creditis_status s = CREDITIS_OK;
  char delimiter = delimiter_of(format);
  bool check_convergence = false;

  if (run->parsed()) {
    creditis_config* cfg = nullptr;
    s = creditis_config_load(config_path.c_str(), &cfg);
    auto set = [&](const char* key, const std::string& value) {
      if (s == CREDITIS_OK) s = creditis_config_set(cfg, "experiment", key, value.c_str());
    };
    if (s == CREDITIS_OK) {
      if (seed) set("seed", std::to_string(*seed));
      if (b1) set("B1", std::to_string(*b1));
      if (b2) set("B2", std::to_string(*b2));
      if (threads) set("threads", std::to_string(*threads));
      if (!mode.empty()) set("mode", mode);
    }
    if (s == CREDITIS_OK) s = creditis_run(cfg, &report);
    creditis_config_free(cfg);
    if (s == CREDITIS_OK && format.empty()) delimiter = creditis_report_delimiter(report);
    check_convergence = true;
  } else if (table->parsed() || fft->parsed()) {
    creditis_table_options opt;
    creditis_table_options_init(&opt);
    if (seed) {
      opt.has_seed = 1;
      opt.seed = *seed;
    }
    if (b1) opt.b1 = *b1;
    if (b2) opt.b2 = *b2;
    if (threads) opt.threads = *threads;
    s = creditis_reproduce_table(fft->parsed() ? 4 : table_id, &opt, &report);
  } else if (demo->parsed()) {
    creditis_demo_options opt;
    creditis_demo_options_init(&opt);
    if (samples) opt.samples = *samples;
    if (pilot) opt.pilot = *pilot;
    if (seed) opt.seed = *seed;
    s = creditis_tilt_demo(family.c_str(), event.c_str(), &opt, &report);
  }
  if (s != CREDITIS_OK) return report_error(s);

  int rc = emit(report, out_path, delimiter);
  if (rc == kExitOk && check_convergence && !creditis_report_all_converged(report)) {
    std::cerr << "creditis-cli: tilt search did not converge; report written\n";
    rc = kExitNumerical;
  }
  creditis_report_free(report);
  return rc;
}
