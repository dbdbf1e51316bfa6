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


// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "creditis/app/harness.hpp"
#include "creditis/common/error.hpp"
#include "creditis/distributions/random_stream.hpp"
#include "creditis/engine/engine.hpp"
#include "creditis/families/demo.hpp"
#include "creditis/families/gamma_family.hpp"
#include "creditis/families/mixture_family.hpp"
#include "creditis/families/mvn_family.hpp"
#include "creditis/families/normal_family.hpp"
#include "creditis/lossdist/lossdist.hpp"
#include "creditis/lossdist/oracles.hpp"
#include "creditis/portfolio/presets.hpp"
#include "creditis/tilting/conjugate.hpp"

using namespace creditis;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

// Standard error of a reference Monte Carlo value p obtained with VR factor
// vr over b2 samples.
double reference_se(double p, double vr, double b2) { return std::sqrt(p * (1.0 - p) / (vr * b2)); }

double combined_se(double se, double p, double vr, double b2) {
  const double q = reference_se(p, vr, b2);
  return std::sqrt(se * se + q * q);
}

const fam::DemoArm& arm(const fam::DemoResult& r, const std::string& label) {
  for (const auto& a : r.arms) {
    if (a.label == label) return a;
  }
  throw InvalidArgument("no arm " + label);
}

fam::DemoOptions demo_options(int table) {
  fam::DemoOptions o;
  o.seed = app::default_table_seed(table);
  return o;
}

engine::ExperimentConfig portfolio_config(const port::Preset& p, int table, double b) {
  engine::ExperimentConfig c;
  c.b1 = 5000;
  c.b2 = 10000;
  c.mask = p.mask;
  c.b = b;
  c.seed = app::default_table_seed(table);
  return c;
}

// 1. Loss distribution by Fourier inversion.
void criterion_fft(Outcome& out) {
  const int n = 250;
  const VectorXd p = VectorXd::Constant(n, 0.1);
  const std::vector<std::int64_t> ones(n, 1);
  const auto q = loss::invert_to_pmf(loss::char_function_samples(p, loss::LossLattice(ones)));
  for (std::int64_t tau : {20, 10, 5}) {
    const double err = std::fabs(loss::cdf(q, tau) - loss::binomial_cdf_oracle(n, 0.1, tau));
    out.check(err <= 1e-10, "equal tau=" + std::to_string(tau) + " err " + sci(err));
  }
  const auto c = port::exposure_profile(port::ExposureKind::kFiveLevel, n);
  const auto f = loss::invert_to_pmf(loss::char_function_samples(p, loss::LossLattice(c)));
  const auto ref = loss::convolution_oracle(p, c);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.pmf.size(); ++k) {
    const double r = k < ref.pmf.size() ? ref.pmf[k] : 0.0;
    worst = std::max(worst, std::fabs(f.pmf[k] - r));
  }
  out.check(worst <= 1e-10, "five-level entrywise " + sci(worst));
  for (std::int64_t tau : {100, 50}) {
    const double err = std::fabs(loss::cdf(f, tau) - loss::cdf(ref, tau));
    out.check(err <= 1e-10, "five-level tau=" + std::to_string(tau) + " err " + sci(err));
  }
  const double c200 = loss::cdf(f, 200);
  out.check(std::fabs(c200 - 1.29e-1) <= 1e-3, "P(L<=200)=" + sci(c200));
}

// 2. Normal family.
void criterion_normal(Outcome& out) {
  const std::vector<double> gates{5, 20, 150, 1000};
  for (int a = 1; a <= 4; ++a) {
    const auto r = fam::run_tilt_demo("normal", "x>" + std::to_string(a), demo_options(1));
    const auto& m = arm(r, "mu+sigma");
    const double z = std::fabs(m.is.estimate - r.reference) / m.is.std_error;
    out.check(z <= 3.0, "a=" + std::to_string(a) + " " + sci(m.is.estimate) + " (" +
                            fmt("%.2f", z) + " SE)");
    out.check(m.is.vr >= gates[a - 1], "VR " + fmt("%.1f", m.is.vr) + ">=" + fmt("%g", gates[a - 1]));
  }
}

// 3. Bivariate normal, X1 + X2 > 5.
void criterion_mvn(Outcome& out) {
  const auto r = fam::run_tilt_demo("mvn2", "sum>5", demo_options(2));
  const auto& m = arm(r, "mu+sigma+rho");
  const double se = combined_se(m.is.std_error, 1.8e-4, 4036, 1e4);
  const double z = std::fabs(m.is.estimate - 1.8e-4) / se;
  out.check(z <= 3.0, "estimate " + sci(m.is.estimate) + " vs 1.8e-4 (" + fmt("%.2f", z) +
                          " combined SE; exact " + sci(r.reference) + ")");
  out.check(m.is.vr >= 500, "VR " + fmt("%.0f", m.is.vr));
}

// 4. Gamma family with alpha = 4, beta = 0.5.
void criterion_gamma(Outcome& out) {
  // Relative band on VR comparisons; a VR estimate from 1e4 samples carries
  // roughly this much noise.
  const double band = 0.1;
  for (const char* ev : {"x>10", "x>20", "x>30"}) {
    const auto r = fam::run_tilt_demo("gamma", ev, demo_options(3));
    const auto& both = arm(r, "theta+eta");
    const double z = std::fabs(both.is.estimate - r.reference) / both.is.std_error;
    out.check(z <= 3.0, std::string(ev) + " " + sci(both.is.estimate) + " (" + fmt("%.2f", z) +
                            " SE)");
    const double best = std::max(arm(r, "theta").is.vr, arm(r, "eta").is.vr);
    out.check(both.is.vr >= best * (1.0 - band),
              "VR " + fmt("%.1f", both.is.vr) + " vs single " + fmt("%.1f", best));
  }
  for (const char* ev : {"inv>0.5", "inv>1.5", "inv>2.5"}) {
    const auto r = fam::run_tilt_demo("gamma", ev, demo_options(3));
    const double th = arm(r, "theta").is.vr;
    const double et = arm(r, "eta").is.vr;
    out.check(et > th, std::string(ev) + " VR eta " + fmt("%.1f", et) + " > theta " + fmt("%.1f", th));
  }
}

// 5. Normal mixture at a = 8.
void criterion_mixture(Outcome& out) {
  const auto r = fam::run_tilt_demo("mixture", "x>8", demo_options(5));
  const double mt = arm(r, "mu+theta").is.vr;
  const double ms = arm(r, "mu+sigma").is.vr;
  out.check(mt >= 50, "VR(mu,theta) " + fmt("%.1f", mt));
  out.check(mt > ms, "VR(mu,sigma) " + fmt("%.1f", ms));
}

void portfolio_check(Outcome& out, const std::string& label, const engine::EstimateReport& r,
                     double ref, double ref_vr, double gate, std::size_t b2) {
  const double se = combined_se(r.std_error, ref, ref_vr, static_cast<double>(b2));
  const double z = std::fabs(r.estimate - ref) / se;
  out.check(z <= 3.0, label + " " + sci(r.estimate) + " vs " + sci(ref) + " (" + fmt("%.2f", z) +
                          " combined SE)");
  out.check(r.vr_factor >= gate, "VR " + fmt("%.0f", r.vr_factor));
}

// 6. One-factor t-copula, b = 0.25.
void criterion_one_factor(Outcome& out) {
  const port::Preset p = port::preset("one_factor_t");
  const std::vector<double> nus{4, 8, 12};
  const std::vector<double> ref{8.13e-3, 2.42e-4, 1.07e-5};
  const std::vector<double> vr{338, 6212, 16100};
  const std::vector<double> gate{100, 1000, 3000};
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const auto shock = port::ShockSpec::t_copula({nus[i]}, p.shock.sharing);
    const auto c = portfolio_config(p, 6, p.b);
    const auto r = engine::run_experiment(p.model, shock, c, engine::Mode::kIs);
    portfolio_check(out, "nu=" + fmt("%g", nus[i]), *r.is, ref[i], vr[i], gate[i], c.b2);
  }
}

// 7. Three-factor base case.
void criterion_three_factor(Outcome& out) {
  const port::Preset p = port::preset("three_factor_base");
  const std::vector<double> bs{0.3, 0.5};
  const std::vector<double> ref{3.08e-3, 2.13e-6};
  const std::vector<double> vr{863, 20300};
  const std::vector<double> gate{200, 4000};
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const auto c = portfolio_config(p, 7, bs[i]);
    const auto r = engine::run_experiment(p.model, p.shock, c, engine::Mode::kIs);
    portfolio_check(out, "b=" + fmt("%g", bs[i]), *r.is, ref[i], vr[i], gate[i], c.b2);
    out.check(r.is->converged && r.is->iterations <= 10,
              "iterations " + std::to_string(r.is->iterations));
  }
}

// 8. Gamma-direct shocks, b = 0.32: theta against eta tilting.
void criterion_gig(Outcome& out) {
  const port::Preset p = port::preset("three_factor_gig");
  auto c = portfolio_config(p, 9, 0.32);
  c.mask = port::TiltMask::parse("mu,theta");
  const auto th = engine::run_experiment(p.model, p.shock, c, engine::Mode::kIs);
  c.mask = port::TiltMask::parse("mu,eta");
  const auto et = engine::run_experiment(p.model, p.shock, c, engine::Mode::kIs);
  const double se = combined_se(th.is->std_error, 1.75e-4, 6575, 1e4);
  const double z = std::fabs(th.is->estimate - 1.75e-4) / se;
  out.check(z <= 3.0, "theta " + sci(th.is->estimate) + " (" + fmt("%.2f", z) + " combined SE)");
  out.check(th.is->variance < et.is->variance,
            "variance theta " + sci(th.is->variance) + " < eta " + sci(et.is->variance));
}

// 9. Eight-factor sector preset.
void criterion_cdx(Outcome& out) {
  const port::Preset p = port::preset("cdx_ig_8factor");
  const std::vector<double> bs{0.01, 0.05, 0.2};
  const std::vector<double> ref{2.19e-2, 6.43e-3, 4.18e-4};
  const std::vector<double> vr{89, 142, 494};
  const std::vector<double> gate{20, 40, 100};
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const auto c = portfolio_config(p, 12, bs[i]);
    const auto r = engine::run_experiment(p.model, p.shock, c, engine::Mode::kIs);
    portfolio_check(out, "b=" + fmt("%g", bs[i]), *r.is, ref[i], vr[i], gate[i], c.b2);
  }
}

// 10. Property suites.
double fd_error(const tilt::SufficientFamily& f, const VectorXd& t) {
  const VectorXd g = f.grad_psi(t);
  double worst = 0.0;
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    VectorXd u1 = t, d1 = t, u2 = t, d2 = t;
    u1[i] += h;
    d1[i] -= h;
    u2[i] += 2 * h;
    d2[i] -= 2 * h;
    const double fd = (-f.psi(u2) + 8 * f.psi(u1) - 8 * f.psi(d1) + f.psi(d2)) / (12 * h);
    worst = std::max(worst, std::fabs(fd - g[i]) / std::max(1.0, std::fabs(g[i])));
  }
  return worst;
}

double convexity_rate(const tilt::SufficientFamily& f, const tilt::PayoffFn& payoff,
                      const std::function<VectorXd(dist::RandomStream&)>& draw) {
  const tilt::Pilot pilot = tilt::draw_pilot(f, payoff, 200000, 8);
  dist::RandomStream rs(99, 1);
  int pass = 0;
  const int pairs = 100;
  for (int k = 0; k < pairs; ++k) {
    const VectorXd a = draw(rs);
    const VectorXd b = draw(rs);
    const auto ga = tilt::objective_G(f, a, pilot);
    const auto gb = tilt::objective_G(f, b, pilot);
    const auto gm = tilt::objective_G(f, 0.5 * (a + b), pilot);
    pass += gm.value <= 0.5 * (ga.value + gb.value) + 3.0 * gm.std_error;
  }
  return static_cast<double>(pass) / pairs;
}

VectorXd box(dist::RandomStream& s, const std::vector<std::pair<double, double>>& lim) {
  VectorXd t(static_cast<Eigen::Index>(lim.size()));
  for (std::size_t i = 0; i < lim.size(); ++i) {
    t[static_cast<Eigen::Index>(i)] = lim[i].first + (lim[i].second - lim[i].first) * s.uniform();
  }
  return t;
}

void criterion_properties(Outcome& out) {
  // Unbiasedness at random valid tilts against a conditional-MC reference.
  {
    const port::Preset p = port::preset("three_factor_base");
    auto c = portfolio_config(p, 10, 0.3);
    c.threads = 4;
    const auto opt = engine::search_tilt_parameters(p.model, p.shock, c);
    auto rc = c;
    rc.crude_conditional = true;
    rc.crude_samples = 400000;
    rc.seed = 97;
    const auto ref = engine::crude_estimate(p.model, p.shock, rc);
    dist::RandomStream rng(1234, 0);
    int ok = 0;
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      engine::EngineTilt t = opt.tilt;
      for (Eigen::Index i = 0; i < t.factor.mu.size(); ++i) t.factor.mu[i] += rng.uniform() - 0.5;
      for (Eigen::Index j = 0; j < t.factor.eta.size(); ++j) t.factor.eta[j] *= 0.5 + rng.uniform();
      if (!port::tilt_in_domain(p.shock, t.factor, 1e-6)) continue;
      auto run = c;
      run.seed = 500 + static_cast<std::uint64_t>(k);
      const auto r = engine::estimate_tail(p.model, p.shock, t, run);
      const double se = std::hypot(r.std_error, ref.std_error);
      const double z = std::fabs(r.estimate - ref.estimate) / se;
      worst = std::max(worst, z);
      ok += z <= 4.0;
    }
    out.check(ok == 10, "unbiased " + std::to_string(ok) + "/10 (max " + fmt("%.2f", worst) + " SE)");
  }
  // Midpoint convexity of G.
  {
    const double rn = convexity_rate(
        fam::NormalFamily(), [](const VectorXd& x) { return x[0] > 2.0 ? 1.0 : 0.0; },
        [](dist::RandomStream& s) { return box(s, {{0.0, 3.0}, {-0.3, 0.3}}); });
    const double rg = convexity_rate(
        fam::GammaFamily(4.0, 0.5), [](const VectorXd& x) { return x[0] > 20.0 ? 1.0 : 0.0; },
        [](dist::RandomStream& s) { return box(s, {{-1.5, 1.5}, {-0.2, 0.2}}); });
    out.check(rn >= 0.95 && rg >= 0.95,
              "convexity " + fmt("%.2f", rn) + "/" + fmt("%.2f", rg));
  }
  // Gradient of psi against finite differences.
  {
    dist::RandomStream s(314, 0);
    double worst = 0.0;
    const fam::NormalFamily nf;
    const fam::GammaFamily gf(4.0, 0.5);
    const fam::MvnFamily mf(2);
    const fam::NormalMixtureFamily xf(1.0, 2.0, 0.5);
    for (int k = 0; k < 20; ++k) {
      worst = std::max(worst, fd_error(nf, box(s, {{-2.0, 2.0}, {-0.4, 0.4}})));
      worst = std::max(worst, fd_error(gf, box(s, {{-3.0, 3.0}, {-0.4, 0.4}})));
      worst = std::max(worst, fd_error(mf, box(s, {{-1.0, 1.0}, {-1.0, 1.0}, {-0.2, 0.2},
                                                   {-0.2, 0.2}, {-0.1, 0.1}})));
      worst = std::max(worst, fd_error(xf, box(s, {{-2.0, 2.0}, {-1.5, 1.5}, {-0.4, 0.4},
                                                   {-0.4, 0.4}})));
    }
    out.check(worst <= 1e-6, "grad psi " + sci(worst));
  }
  // FFT pmf normalization.
  {
    dist::RandomStream s(3, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(s.next_u32() % 250);
      VectorXd p(n);
      std::vector<std::int64_t> c(n);
      for (int k = 0; k < n; ++k) {
        p[k] = s.uniform();
        c[k] = 1 + static_cast<std::int64_t>(s.next_u32() % 5);
      }
      const auto q = loss::invert_to_pmf(loss::char_function_samples(p, loss::LossLattice(c)));
      worst = std::max(worst, std::fabs(std::accumulate(q.pmf.begin(), q.pmf.end(), 0.0) - 1.0));
    }
    out.check(worst <= 1e-10, "normalization " + sci(worst));
  }
  // Worker-count invariance.
  {
    const port::Preset p = port::preset("three_factor_base");
    auto c = portfolio_config(p, 10, 0.3);
    c.b1 = 2000;
    c.b2 = 4000;
    bool same = true;
    std::optional<engine::ExperimentResult> first;
    for (int t : {1, 2, 8}) {
      c.threads = t;
      const auto r = engine::run_experiment(p.model, p.shock, c, engine::Mode::kBoth);
      if (first) {
        same = same && r.is->estimate == first->is->estimate &&
               r.is->variance == first->is->variance &&
               r.crude->estimate == first->crude->estimate &&
               r.search->solution.params == first->search->solution.params;
      } else {
        first = r;
      }
    }
    out.check(same, "threads 1/2/8 bitwise");
  }
  // Zero tilt gives a likelihood ratio of exactly one.
  {
    bool exact = true;
    for (const auto& name : port::preset_names()) {
      const port::Preset p = port::preset(name);
      const int m = p.shock.gamma_count(p.model.d());
      const port::TiltedLaw law(p.model, p.shock, port::FactorTilt::zero(p.model.d(), m));
      for (std::size_t i = 0; i < 1000; ++i) {
        dist::RandomStream s(5, i);
        exact = exact && law.log_likelihood_ratio(law.sample(s)) == 0.0;
      }
    }
    const fam::NormalFamily nf;
    const fam::GammaFamily gf(4.0, 0.5);
    const fam::MvnFamily mf(2);
    const fam::NormalMixtureFamily xf(1.0, 2.0, 0.5);
    for (const tilt::SufficientFamily* f : std::initializer_list<const tilt::SufficientFamily*>{&nf, &gf, &mf, &xf}) {
      dist::RandomStream s(6, 0);
      for (int i = 0; i < 1000; ++i) {
        exact = exact && std::exp(f->log_likelihood_ratio(VectorXd::Zero(f->dim()), f->sample_base(s))) == 1.0;
      }
    }
    out.check(exact, "zero-tilt LR == 1");
  }
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "FFT loss distribution", 5, criterion_fft},
      {2, "normal family", 60, criterion_normal},
      {3, "bivariate normal", 60, criterion_mvn},
      {4, "gamma family", 60, criterion_gamma},
      {5, "normal mixture", 120, criterion_mixture},
      {6, "one-factor t-copula", 600, criterion_one_factor},
      {7, "three-factor base case", 900, criterion_three_factor},
      {8, "gamma-direct shocks", 600, criterion_gig},
      {9, "eight-factor sector preset", 600, criterion_cdx},
      {10, "property suites", 600, criterion_properties},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.check(secs < c.limit_s, "runtime " + fmt("%.1f", secs) + "s < " + fmt("%g", c.limit_s) + "s");
    std::printf("criterion %2d %-28s %s  %s\n", c.id, c.name, out.pass ? "PASS" : "FAIL",
                out.detail.str().c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
