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
#include <memory>
#include <string>
#include <vector>

#include "creditis/tilting/conjugate.hpp"

namespace creditis::fam {

using tilt::Vec;

/// Event grammar: "x>A", "sum>A", "both>A", "prod>A", "inv>A" or "const".
struct EventSpec {
  std::string kind;
  double level = 0.0;
};
EventSpec parse_event(const std::string& text);

struct ISEstimate {
  double estimate = 0.0;
  double variance = 0.0;  // per-sample
  double std_error = 0.0;
  /// p(1-p) / variance with p the estimate itself; 0 when undefined.
  double vr = 0.0;
};

/// Plain importance-sampling estimate of E_P[payoff] under Q_t. Sample i uses
/// stream (seed, i), so different tilts see common random numbers.
ISEstimate importance_estimate(const tilt::SufficientFamily& family, const tilt::PayoffFn& payoff,
                               const Vec& t, std::size_t samples, std::uint64_t seed);

struct DemoOptions {
  std::size_t samples = 10000;
  std::size_t pilot = 2000000;
  std::uint64_t seed = 20260101;
  double gamma_alpha = 4.0;
  double gamma_beta = 0.5;
  double mixture_xi = 1.0;
  double mixture_alpha = 2.0;
  double mixture_beta = 0.5;
  double newton_eps = 1e-12;
  int newton_max_iter = 60;
};

struct DemoArm {
  std::string label;
  std::vector<bool> mask;
  tilt::TiltSolution solution;
  ISEstimate is;
};

struct DemoResult {
  std::string family;
  std::string event;
  std::vector<std::string> param_names;
  double reference = 0.0;
  bool reference_exact = false;
  ISEstimate crude;  // zero tilt on the same streams as the arms
  std::vector<DemoArm> arms;
};

/// Families: "normal", "mvn2", "gamma", "mixture". Solves the first-order
/// conditions for every tilt subset of the family and estimates the event
/// probability with each, using common random numbers across subsets.
DemoResult run_tilt_demo(const std::string& family, const std::string& event,
                         const DemoOptions& options = {});

/// Family, payoff and conjugate-expectation provider for a demo event.
struct DemoProblem {
  std::shared_ptr<tilt::SufficientFamily> family;
  tilt::PayoffFn payoff;
  tilt::ConjugateFn conjugate;
  std::shared_ptr<tilt::Pilot> pilot;  // set when the conjugate is sampled
  double reference = 0.0;
  bool reference_exact = false;
  std::vector<std::pair<std::string, std::vector<bool>>> arms;
};
DemoProblem make_demo_problem(const std::string& family, const EventSpec& event,
                              const DemoOptions& options);

}  // namespace creditis::fam
