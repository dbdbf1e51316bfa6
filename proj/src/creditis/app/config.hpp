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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "creditis/engine/engine.hpp"
#include "creditis/portfolio/presets.hpp"

namespace creditis::app {

// Every field is optional; absent fields fall back to the preset (when one
// is named) or to library defaults.
struct ModelSection {
  std::optional<std::string> preset;
  std::optional<std::string> structure;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> d;
  std::optional<double> loading;
  std::optional<std::int64_t> sectors;
  std::optional<double> global_loading;
  std::optional<double> sector_loading;
  std::optional<double> threshold;
  std::optional<double> threshold_scale;
  std::optional<std::string> exposures;
  std::optional<double> sigma_eps;
  std::optional<std::vector<double>> factor_sigma;
  std::optional<double> factor_rho;
  std::optional<std::string> direction;
  bool operator==(const ModelSection&) const = default;
};

struct ShockSection {
  std::optional<std::string> variant;  // t_copula | gamma_direct | degenerate
  std::optional<std::vector<double>> nu;
  std::optional<std::vector<double>> alpha;
  std::optional<std::vector<double>> beta;
  std::optional<std::string> sharing;  // shared | independent
  bool operator==(const ShockSection&) const = default;
};

struct ExperimentSection {
  std::optional<std::string> id;
  std::optional<double> b;
  std::optional<std::int64_t> tau;
  std::optional<std::int64_t> b1;
  std::optional<std::int64_t> b2;
  std::optional<double> eps;
  std::optional<std::int64_t> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> tilt;
  std::optional<std::string> mode;
  std::optional<std::int64_t> threads;
  std::optional<bool> crude_conditional;
  std::optional<std::int64_t> crude_samples;
  bool operator==(const ExperimentSection&) const = default;
};

struct OutputSection {
  std::optional<std::string> path;
  std::optional<std::string> format;  // csv | tsv
  bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
  ModelSection model;
  ShockSection shock;
  ExperimentSection experiment;
  OutputSection output;
  /// "section.key" -> 1-based source line, filled by parse_config. Not part
  /// of equality.
  std::map<std::string, int> lines;

  bool operator==(const RunConfig& o) const {
    return model == o.model && shock == o.shock && experiment == o.experiment &&
           output == o.output;
  }
};

/// INI-style text: [section] headers, key = value lines, '#' or ';' comments.
/// Unknown sections or keys, duplicates and malformed values throw
/// ConfigError carrying the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Sets one field from text, replacing any earlier value. Unknown keys and
/// malformed values throw ConfigError.
void set_config_value(RunConfig& config, const std::string& section, const std::string& key,
                      const std::string& value);

/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);
/// Hash of the canonical text without `threads` and [output], which do not
/// change results; 16 hex digits.
std::string config_hash(const RunConfig& config);

struct ResolvedRun {
  std::string id;
  port::ModelBlueprint blueprint;
  port::PortfolioModel model;
  port::ShockSpec shock;
  engine::ExperimentConfig experiment;
  engine::Mode mode = engine::Mode::kIs;
  std::string out_path;  // empty means stdout
  char delimiter = ',';
};

/// Builds and validates every object the run needs without sampling.
/// Violations throw ConfigError anchored at the offending key when possible.
ResolvedRun resolve(const RunConfig& config);

}  // namespace creditis::app
