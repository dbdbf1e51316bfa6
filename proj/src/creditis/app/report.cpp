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

#include "creditis/app/report.hpp"

#include <cstdio>

namespace creditis::app {

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fixed3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string quote(const std::string& s, char delimiter) {
  if (s.find(delimiter) == std::string::npos && s.find('"') == std::string::npos &&
      s.find('\n') == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render(const std::vector<ReportRow>& rows, char delim,
                   const std::vector<std::string>& notes, bool timed) {
  std::string out =
      "# search_time_s and estimate_time_s are wall-clock seconds and vary between runs\n";
  const auto cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += delim;
    out += cols[i];
  }
  out += "\n";
  for (const auto& r : rows) {
    const std::vector<std::string> cells{
        quote(r.experiment_id, delim),
        r.mode,
        sci(r.estimate),
        sci(r.variance),
        sci(r.std_error),
        sci(r.vr_factor),
        std::to_string(r.iterations),
        timed ? fixed3(r.search_time_s) : "",
        timed ? fixed3(r.estimate_time_s) : "",
        std::to_string(r.seed),
        r.config_hash,
        r.ref_estimate ? sci(*r.ref_estimate) : "",
        r.ref_vr ? sci(*r.ref_vr) : "",
        quote(r.note, delim),
    };
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += delim;
      out += cells[i];
    }
    out += "\n";
  }
  for (const auto& n : notes) out += "# " + n + "\n";
  return out;
}

}  // namespace

ReportRow make_row(const std::string& id, const engine::EstimateReport& r, std::uint64_t seed,
                   const std::string& hash) {
  ReportRow row;
  row.experiment_id = id;
  row.mode = r.mode;
  row.estimate = r.estimate;
  row.variance = r.variance;
  row.std_error = r.std_error;
  row.vr_factor = r.vr_factor;
  row.iterations = r.iterations;
  row.search_time_s = r.search_time_s;
  row.estimate_time_s = r.estimate_time_s;
  row.seed = seed;
  row.config_hash = hash;
  row.converged = r.converged;
  if (r.mode == "is" && !r.converged) row.note = "newton did not converge";
  return row;
}

std::vector<std::string> report_columns() {
  return {"experiment_id", "mode",       "estimate",        "variance",    "std_error",
          "vr_factor",     "iterations", "search_time_s",   "estimate_time_s", "seed",
          "config_hash",   "ref_estimate", "ref_vr",        "note"};
}

std::string format_report(const std::vector<ReportRow>& rows, char delimiter,
                          const std::vector<std::string>& notes) {
  return render(rows, delimiter, notes, true);
}

std::string format_report_untimed(const std::vector<ReportRow>& rows, char delimiter,
                                  const std::vector<std::string>& notes) {
  return render(rows, delimiter, notes, false);
}

}  // namespace creditis::app
