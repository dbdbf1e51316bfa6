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
#include <optional>
#include <string>
#include <vector>

#include "creditis/engine/engine.hpp"

namespace creditis::app {

struct ReportRow {
  std::string experiment_id;
  std::string mode;
  double estimate = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double vr_factor = 0.0;
  int iterations = 0;
  double search_time_s = 0.0;
  double estimate_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
  /// Reference values the row is compared against, when there are any.
  std::optional<double> ref_estimate;
  std::optional<double> ref_vr;
  std::string note;
  bool converged = true;  // not printed; the note records failures
};

ReportRow make_row(const std::string& id, const engine::EstimateReport& r, std::uint64_t seed,
                   const std::string& hash);

std::vector<std::string> report_columns();

/// Header, one line per row, then `notes` as '#' lines. Timings carry three
/// decimals; a leading comment marks them as wall-clock values.
std::string format_report(const std::vector<ReportRow>& rows, char delimiter = ',',
                          const std::vector<std::string>& notes = {});

/// Same text with the timing columns blanked, for determinism checks.
std::string format_report_untimed(const std::vector<ReportRow>& rows, char delimiter = ',',
                                  const std::vector<std::string>& notes = {});

}  // namespace creditis::app
