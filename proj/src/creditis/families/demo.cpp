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

#include "creditis/families/demo.hpp"

#include <cmath>
#include <limits>

#include "creditis/common/error.hpp"
#include "creditis/distributions/special_functions.hpp"
#include "creditis/families/gamma_family.hpp"
#include "creditis/families/mixture_family.hpp"
#include "creditis/families/mvn_family.hpp"
#include "creditis/families/normal_family.hpp"

namespace creditis::fam {

EventSpec parse_event(const std::string& text) {
  if (text == "const") return {"const", 0.0};
  const auto pos = text.find('>');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size()) {
    throw InvalidArgument("event must look like KIND>LEVEL or be 'const': " + text);
  }
  EventSpec ev;
  ev.kind = text.substr(0, pos);
  const std::string level = text.substr(pos + 1);
  std::size_t used = 0;
  try {
    ev.level = std::stod(level, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != level.size() || !std::isfinite(ev.level)) {
    throw InvalidArgument("event level is not a number: " + text);
  }
  if (ev.kind != "x" && ev.kind != "sum" && ev.kind != "both" && ev.kind != "prod" &&
      ev.kind != "inv") {
    throw InvalidArgument("unknown event kind '" + ev.kind + "'");
  }
  return ev;
}

ISEstimate importance_estimate(const tilt::SufficientFamily& family, const tilt::PayoffFn& payoff,
                               const Vec& t, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidArgument("importance_estimate: need at least two samples");
  const double psi = family.psi(t);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    dist::RandomStream stream(seed, i);
    const Vec x = family.sample_tilted(t, stream);
    const double r = payoff(x);
    const double y = r == 0.0 ? 0.0 : r * std::exp(-t.dot(family.statistics(x)) + psi);
    if (!std::isfinite(y)) throw NumericalError("importance_estimate: non-finite weight");
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (y - mean);
  }
  ISEstimate out;
  out.estimate = mean;
  out.variance = m2 / static_cast<double>(samples - 1);
  out.std_error = std::sqrt(out.variance / static_cast<double>(samples));
  if (out.variance > 0.0 && mean > 0.0 && mean < 1.0) {
    out.vr = mean * (1.0 - mean) / out.variance;
  }
  return out;
}

namespace {

using Arms = std::vector<std::pair<std::string, std::vector<bool>>>;

void require_kind(const EventSpec& ev, std::initializer_list<const char*> kinds,
                  const std::string& family) {
  for (const char* k : kinds) {
    if (ev.kind == k) return;
  }
  throw InvalidArgument("event '" + ev.kind + "' is not available for family " + family);
}

DemoProblem normal_problem(const EventSpec& ev) {
  require_kind(ev, {"x", "const"}, "normal");
  DemoProblem p;
  p.family = std::make_shared<NormalFamily>();
  p.arms = Arms{{"mu", {true, false}}, {"sigma", {false, true}}, {"mu+sigma", {true, true}}};
  p.reference_exact = true;
  if (ev.kind == "const") {
    p.payoff = [](const Vec&) { return 1.0; };
    p.conjugate = [](const Vec& t) { return normal_conjugate_full(t); };
    p.reference = 1.0;
  } else {
    const double a = ev.level;
    p.payoff = [a](const Vec& x) { return x[0] > a ? 1.0 : 0.0; };
    p.conjugate = [a](const Vec& t) { return normal_conjugate_above(t, a); };
    p.reference = dist::normal_tail(a);
  }
  return p;
}

DemoProblem gamma_problem(const EventSpec& ev, const DemoOptions& o) {
  require_kind(ev, {"x", "inv", "const"}, "gamma");
  GammaPayoffSupport support;
  if (ev.kind == "x") support.away_from_zero = ev.level > 0.0;
  if (ev.kind == "inv") support.bounded = true;
  auto family = std::make_shared<GammaFamily>(o.gamma_alpha, o.gamma_beta, support);
  DemoProblem p;
  p.family = family;
  p.arms = Arms{{"theta", {true, false}}, {"eta", {false, true}}, {"theta+eta", {true, true}}};
  p.reference_exact = true;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  if (ev.kind == "const") {
    p.payoff = [](const Vec&) { return 1.0; };
    p.reference = 1.0;
  } else if (ev.kind == "x") {
    lo = ev.level;
    p.payoff = [lo](const Vec& x) { return x[0] > lo ? 1.0 : 0.0; };
    p.reference = dist::regularized_upper_gamma(o.gamma_alpha, o.gamma_beta, lo);
  } else {
    if (!(ev.level > 0.0)) throw InvalidArgument("inv>A needs A > 0");
    hi = 1.0 / ev.level;
    const double a = ev.level;
    p.payoff = [a](const Vec& x) { return 1.0 / x[0] > a ? 1.0 : 0.0; };
    p.reference = dist::regularized_lower_gamma(o.gamma_alpha, o.gamma_beta, hi);
  }
  const GammaFamily* f = family.get();
  p.conjugate = [f, lo, hi](const Vec& t) { return gamma_conjugate_interval(*f, t, lo, hi); };
  return p;
}

DemoProblem mvn_problem(const EventSpec& ev, const DemoOptions& o) {
  require_kind(ev, {"sum", "both", "prod", "const"}, "mvn2");
  auto family = std::make_shared<MvnFamily>(2);
  DemoProblem p;
  p.family = family;
  p.arms = Arms{{"mu", {true, true, false, false, false}},
                {"sigma", {false, false, true, true, false}},
                {"rho", {false, false, false, false, true}},
                {"mu+sigma+rho", {true, true, true, true, true}}};
  const double a = ev.level;
  if (ev.kind == "const") {
    p.payoff = [](const Vec&) { return 1.0; };
    p.reference = 1.0;
    p.reference_exact = true;
  } else if (ev.kind == "sum") {
    p.payoff = [a](const Vec& x) { return x[0] + x[1] > a ? 1.0 : 0.0; };
    p.reference = dist::normal_tail(a / std::sqrt(2.0));
    p.reference_exact = true;
  } else if (ev.kind == "both") {
    p.payoff = [a](const Vec& x) { return x[0] > a && x[1] > a ? 1.0 : 0.0; };
    const double q = dist::normal_tail(a);
    p.reference = q * q;
    p.reference_exact = true;
  } else {
    p.payoff = [a](const Vec& x) {
      return x[0] > 0.0 && x[1] > 0.0 && x[0] * x[1] > a ? 1.0 : 0.0;
    };
  }
  p.pilot = std::make_shared<tilt::Pilot>(
      tilt::draw_pilot(*family, p.payoff, o.pilot, o.seed ^ 0x9e3779b97f4a7c15ULL));
  if (!p.reference_exact) {
    p.reference = static_cast<double>(p.pilot->active()) / static_cast<double>(p.pilot->total());
  }
  const tilt::Pilot* pilot = p.pilot.get();
  p.conjugate = [pilot](const Vec& t) { return tilt::conjugate_expectation(*pilot, t); };
  return p;
}

DemoProblem mixture_problem(const EventSpec& ev, const DemoOptions& o) {
  require_kind(ev, {"x", "const"}, "mixture");
  GammaPayoffSupport w_support;
  w_support.away_from_zero = ev.kind == "x" && ev.level > 0.0;
  auto family = std::make_shared<NormalMixtureFamily>(o.mixture_xi, o.mixture_alpha,
                                                      o.mixture_beta, w_support);
  DemoProblem p;
  p.family = family;
  p.arms = Arms{{"mu", {true, false, false, false}},         {"sigma", {false, false, true, false}},
                {"mu+sigma", {true, false, true, false}},    {"theta", {false, true, false, false}},
                {"eta", {false, false, false, true}},        {"mu+theta", {true, true, false, false}},
                {"mu+eta", {true, false, false, true}}};
  p.reference_exact = true;
  const NormalMixtureFamily* f = family.get();
  if (ev.kind == "const") {
    p.payoff = [](const Vec&) { return 1.0; };
    p.reference = 1.0;
    const double inf = std::numeric_limits<double>::infinity();
    p.conjugate = [f, inf](const Vec& t) {
      const Vec sz = normal_conjugate_full(NormalMixtureFamily::z_part(t));
      const Vec tw = NormalMixtureFamily::w_part(t);
      const Vec sw = gamma_conjugate_interval(f->w_family(), tw, 0.0, inf);
      return NormalMixtureFamily::join(sz, sw);
    };
  } else {
    const double a = ev.level;
    p.payoff = [f, a](const Vec& x) { return f->payoff(x, a); };
    p.reference = f->tail_probability(a);
    p.conjugate = [f, a](const Vec& t) { return mixture_conjugate_above(*f, t, a); };
  }
  return p;
}

}  // namespace

DemoProblem make_demo_problem(const std::string& family, const EventSpec& event,
                              const DemoOptions& options) {
  if (family == "normal") return normal_problem(event);
  if (family == "gamma") return gamma_problem(event, options);
  if (family == "mvn2") return mvn_problem(event, options);
  if (family == "mixture") return mixture_problem(event, options);
  throw InvalidArgument("unknown family '" + family + "' (normal, mvn2, gamma, mixture)");
}

DemoResult run_tilt_demo(const std::string& family, const std::string& event,
                         const DemoOptions& options) {
  const EventSpec ev = parse_event(event);
  DemoProblem problem = make_demo_problem(family, ev, options);
  DemoResult out;
  out.family = family;
  out.event = event;
  out.param_names = problem.family->param_names();
  out.reference = problem.reference;
  out.reference_exact = problem.reference_exact;
  tilt::NewtonOptions newton;
  newton.eps = options.newton_eps;
  newton.max_iter = options.newton_max_iter;
  out.crude = importance_estimate(*problem.family, problem.payoff,
                                  Vec::Zero(problem.family->dim()), options.samples, options.seed);
  for (const auto& [label, mask] : problem.arms) {
    DemoArm arm;
    arm.label = label;
    arm.mask = mask;
    arm.solution = tilt::solve_tilt(*problem.family, problem.conjugate, mask, newton);
    arm.is = importance_estimate(*problem.family, problem.payoff, arm.solution.params,
                                 options.samples, options.seed);
    out.arms.push_back(std::move(arm));
  }
  return out;
}

}  // namespace creditis::fam
