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

#include "creditis/app/report.hpp"
#include "creditis/families/demo.hpp"

namespace creditis::app {

struct TableOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> b1;
  std::optional<std::size_t> b2;
  int threads = 1;
};

struct TableReport {
  int id = 0;
  std::string title;
  std::uint64_t seed = 0;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
};

/// Reproducible table ids: 1-10 and 12.
std::vector<int> table_ids();
std::uint64_t default_table_seed(int id);

/// Runs the experiment grid of a table. Unknown ids throw ConfigError.
TableReport reproduce_table(int id, const TableOptions& options = {});

/// One-family tilt demo with a crude row and one row per tilt subset; the
/// note column lists the fitted parameters.
TableReport tilt_demo_report(const std::string& family, const std::string& event,
                             const fam::DemoOptions& options = {});

}  // namespace creditis::app
