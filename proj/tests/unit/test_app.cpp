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


#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "creditis/app/config.hpp"
#include "creditis/app/harness.hpp"
#include "creditis/app/report.hpp"
#include "creditis/common/error.hpp"

namespace creditis::app {
namespace {

const char* kValid = R"(# sample run
[model]
preset = three_factor_base

[experiment]
id = base_b03
b = 0.3
B1 = 2000
B2 = 2000
seed = 7
mode = both
threads = 2

[output]
format = tsv
)";

TEST(Config, ParsesAndRoundTrips) {
  const RunConfig c = parse_config(kValid);
  EXPECT_EQ(*c.model.preset, "three_factor_base");
  EXPECT_EQ(*c.experiment.b1, 2000);
  EXPECT_EQ(*c.experiment.seed, 7u);
  EXPECT_EQ(c.lines.at("experiment.B1"), 8);
  const RunConfig again = parse_config(serialize_config(c));
  EXPECT_EQ(again, c);
  EXPECT_EQ(serialize_config(again), serialize_config(c));
}

TEST(Config, UnknownKeyReportsItsLine) {
  const std::string text = "[experiment]\nb = 0.3\nB3 = 10\n";
  try {
    parse_config(text);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("B3"), std::string::npos);
  }
}

TEST(Config, MalformedInput) {
  EXPECT_THROW(parse_config("[model\n"), ConfigError);
  EXPECT_THROW(parse_config("[nope]\n"), ConfigError);
  EXPECT_THROW(parse_config("b = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nb 0.3\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nb =\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nb = 0.3\nb = 0.4\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nB1 = many\n"), ConfigError);
  EXPECT_THROW(parse_config("[shock]\nnu = 4,,x\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/creditis.ini"), ConfigError);
}

TEST(Config, InlineCommentsAndOverrides) {
  RunConfig c = parse_config("[experiment]\nb = 0.3 # loss fraction\n");
  EXPECT_DOUBLE_EQ(*c.experiment.b, 0.3);
  set_config_value(c, "experiment", "B2", "123");
  EXPECT_EQ(*c.experiment.b2, 123);
  EXPECT_THROW(set_config_value(c, "experiment", "B3", "1"), ConfigError);
}

TEST(Config, HashIgnoresThreadsAndOutput) {
  RunConfig a = parse_config(kValid);
  RunConfig b = a;
  b.experiment.threads = 8;
  b.output.path = "/tmp/elsewhere.csv";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.experiment.seed = 8;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  // FNV-1a 64-bit reference values.
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Resolve, PresetRun) {
  const ResolvedRun r = resolve(parse_config(kValid));
  EXPECT_EQ(r.id, "base_b03");
  EXPECT_EQ(r.model.n(), 250);
  EXPECT_EQ(r.model.d(), 3);
  EXPECT_EQ(r.experiment.b1, 2000u);
  EXPECT_EQ(r.experiment.resolve_tau(r.model.n()), 75);
  EXPECT_EQ(r.mode, engine::Mode::kBoth);
  EXPECT_EQ(r.delimiter, '\t');
  EXPECT_TRUE(r.experiment.mask.mu);
  EXPECT_TRUE(r.experiment.mask.eta);
}

TEST(Resolve, ErrorsCarryLines) {
  auto expect_line = [](const std::string& text, int line) {
    try {
      resolve(parse_config(text));
      FAIL() << text;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.line(), line) << text << " -> " << e.what();
    }
  };
  expect_line("[model]\npreset = nope\n[experiment]\nb = 0.3\n", 2);
  expect_line("[model]\npreset = fft_check\n[experiment]\nb = 0.3\nB1 = 0\n", 5);
  expect_line("[model]\npreset = fft_check\n[experiment]\ntau = 100000\n", 4);
  expect_line("[model]\npreset = fft_check\n[shock]\nvariant = levy\n[experiment]\nb = 0.1\n", 4);
  expect_line("[model]\npreset = fft_check\n[experiment]\nb = 0.1\n[output]\nformat = xml\n", 6);
}

TEST(Report, DeterministicUntimedOutput) {
  engine::EstimateReport e;
  e.mode = "is";
  e.estimate = 1.25e-3;
  e.variance = 4e-6;
  e.std_error = 2e-5;
  e.vr_factor = 312.0;
  e.iterations = 6;
  e.search_time_s = 1.5;
  e.estimate_time_s = 2.5;
  ReportRow row = make_row("x,y", e, 42, "abcd");
  row.ref_estimate = 1.3e-3;
  const std::string out = format_report_untimed({row}, ',', {"hello"});
  EXPECT_EQ(out,
            "# search_time_s and estimate_time_s are wall-clock seconds and vary between runs\n"
            "experiment_id,mode,estimate,variance,std_error,vr_factor,iterations,search_time_s,"
            "estimate_time_s,seed,config_hash,ref_estimate,ref_vr,note\n"
            "\"x,y\",is,1.250000e-03,4.000000e-06,2.000000e-05,3.120000e+02,6,,,42,abcd,"
            "1.300000e-03,,\n"
            "# hello\n");
  EXPECT_NE(format_report({row}).find(",1.500,2.500,"), std::string::npos);
  e.converged = false;
  EXPECT_EQ(make_row("a", e, 1, "h").note, "newton did not converge");
}

TEST(Harness, TableIdsAndErrors) {
  const auto ids = table_ids();
  EXPECT_EQ(ids.size(), 11u);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), 11), 0);
  EXPECT_THROW(reproduce_table(11), ConfigError);
  EXPECT_THROW(reproduce_table(0), ConfigError);
  EXPECT_NE(default_table_seed(3), default_table_seed(4));
}

TEST(Harness, LossDistributionTableIsDeterministic) {
  const TableReport a = reproduce_table(4);
  const TableReport b = reproduce_table(4);
  EXPECT_EQ(format_report_untimed(a.rows, ',', a.notes), format_report_untimed(b.rows, ',', b.notes));
  ASSERT_FALSE(a.rows.empty());
  for (const auto& r : a.rows) {
    ASSERT_TRUE(r.ref_estimate.has_value());
    EXPECT_NEAR(r.estimate / *r.ref_estimate, 1.0, 0.01) << r.experiment_id;
  }
}

}  // namespace
}  // namespace creditis::app
