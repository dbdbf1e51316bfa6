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

#include <cmath>
#include <set>

#include "creditis/common/error.hpp"
#include "creditis/distributions/random_stream.hpp"
#include "creditis/distributions/special_functions.hpp"
#include "creditis/portfolio/model.hpp"
#include "creditis/portfolio/presets.hpp"

namespace creditis::port {
namespace {

PortfolioModel independent_model(int n, double chi, double idio_std, Direction dir) {
  return PortfolioModel::make(Mat::Zero(n, 1), Vec::Constant(n, chi),
                              std::vector<std::int64_t>(n, 1), idio_std, Mat::Identity(1, 1), dir);
}

FactorSample unit_sample(int d) {
  FactorSample s;
  s.z = Vec::Zero(d);
  s.w = Vec::Ones(d + 1);
  return s;
}

TEST(ConditionalProbs, SymmetricThreshold) {
  const Preset p = preset("three_factor_base");
  PortfolioModel m = p.model;
  m.thresholds.setZero();
  const Vec q = conditional_default_probs(m, unit_sample(m.d()));
  for (int k = 0; k < m.n(); ++k) EXPECT_DOUBLE_EQ(q[k], 0.5);
}

TEST(ConditionalProbs, BaseThresholdAndDirection) {
  const double chi = 0.5 * std::sqrt(250.0);
  const Vec up = conditional_default_probs(independent_model(250, chi, 3.0, Direction::kAbove),
                                           unit_sample(1));
  const Vec down = conditional_default_probs(independent_model(250, chi, 3.0, Direction::kBelow),
                                             unit_sample(1));
  // erfc oracle: 0.5 erfc(2.63523 / sqrt 2) = 4.2040e-3.
  EXPECT_NEAR(up[0], 4.2040e-3, 5e-8);
  EXPECT_NEAR(up[0], dist::normal_tail(chi / 3.0), 1e-15);
  EXPECT_NEAR(down[7], 1.0 - up[7], 1e-15);
}

TEST(ConditionalProbs, DegenerateObligor) {
  // Full systematic loading leaves no idiosyncratic term.
  Mat l(2, 1);
  l << 1.0, 1.0;
  Vec chi(2);
  chi << 0.5, -0.5;
  const PortfolioModel m = PortfolioModel::make(l, chi, {1, 1}, 1.0, Mat::Identity(1, 1),
                                                Direction::kAbove);
  const Vec p = conditional_default_probs(m, unit_sample(1));
  EXPECT_EQ(p[0], 0.0);
  EXPECT_EQ(p[1], 1.0);
  FactorSample bad = unit_sample(1);
  bad.z[0] = std::nan("");
  EXPECT_THROW(conditional_default_probs(m, bad), Error);
}

TEST(Model, RejectsInvalidInputs) {
  Mat l(1, 2);
  l << 0.8, 0.8;
  EXPECT_THROW(PortfolioModel::make(l, Vec::Zero(1), {1}, 1.0, Mat::Identity(2, 2),
                                    Direction::kAbove),
               Error);
  EXPECT_THROW(PortfolioModel::make(Mat::Zero(1, 1), Vec::Zero(1), {-1}, 1.0,
                                    Mat::Identity(1, 1), Direction::kAbove),
               Error);
  Mat cov(2, 2);
  cov << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(PortfolioModel::make(Mat::Zero(1, 2), Vec::Zero(1), {1}, 1.0, cov,
                                    Direction::kAbove),
               Error);
}

TEST(Model, IdiosyncraticLoadingComplement) {
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    for (int k = 0; k < p.model.n(); ++k) {
      const double s = p.model.loadings.row(k).squaredNorm();
      ASSERT_NEAR(p.model.idio_loading[k], std::sqrt(1.0 - s), 1e-12) << name;
    }
  }
}

TEST(ShockSampling, SharedTCopulaInverseMean) {
  const Preset p = preset("one_factor_t");
  const ShockSpec shock = ShockSpec::t_copula({4.0}, Sharing::kShared);
  const int n = 1000000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    dist::RandomStream s(5, static_cast<std::uint64_t>(i));
    const FactorSample f = sample_factors(p.model, shock, s);
    ASSERT_EQ(f.q.size(), 1);
    ASSERT_EQ(f.w[0], f.w[1]);
    ASSERT_DOUBLE_EQ(f.w[0] * f.q[0], 4.0);
    sum += 1.0 / f.w[0];
    sq += 1.0 / (f.w[0] * f.w[0]);
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 1.0, 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST(ShockSampling, IndependentTCopulaProducts) {
  const Preset p = preset("three_factor_base");
  ASSERT_EQ(p.shock.kind, ShockKind::kTCopula);
  for (int i = 0; i < 1000; ++i) {
    dist::RandomStream s(6, static_cast<std::uint64_t>(i));
    const FactorSample f = sample_factors(p.model, p.shock, s);
    ASSERT_EQ(f.q.size(), 4);
    for (int j = 0; j < 4; ++j) ASSERT_DOUBLE_EQ(f.w[j] * f.q[j], p.shock.nu[j]);
  }
}

TEST(ShockSampling, GammaDirectMean) {
  const Preset p = preset("three_factor_base");
  const ShockSpec shock = ShockSpec::gamma_direct({2.0, 2.0, 2.0, 2.0}, {0.5, 0.5, 0.5, 0.5});
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    dist::RandomStream s(7, static_cast<std::uint64_t>(i));
    sum += sample_factors(p.model, shock, s).w[2];
  }
  EXPECT_NEAR(sum / n, 4.0, 4.0 * std::sqrt(8.0 / n));
}

TEST(ShockSampling, DegenerateIsOne) {
  const Preset p = preset("three_factor_base");
  for (int i = 0; i < 100; ++i) {
    dist::RandomStream s(8, static_cast<std::uint64_t>(i));
    const FactorSample f = sample_factors(p.model, ShockSpec::degenerate(), s);
    ASSERT_TRUE((f.w.array() == 1.0).all());
  }
}

TEST(ShockSampling, TiltedDomainIsChecked) {
  const Preset p = preset("three_factor_base");
  FactorTilt t = FactorTilt::zero(3, 4);
  t.theta[0] = 4.0;  // nu_1 / 2 - theta = 0
  EXPECT_FALSE(tilt_in_domain(p.shock, t));
  dist::RandomStream s(1, 1);
  EXPECT_THROW(sample_factors(p.model, p.shock, s, &t), DomainError);
  t.theta[0] = 0.0;
  t.eta[1] = -0.5;
  EXPECT_FALSE(tilt_in_domain(p.shock, t));
}

TEST(TiltedLaw, ZeroTiltRatioIsExactlyZero) {
  for (const char* name : {"one_factor_t", "three_factor_base", "three_factor_gig", "cdx_ig_8factor"}) {
    const Preset p = preset(name);
    const TiltedLaw law(p.model, p.shock, FactorTilt::zero(p.model.d(), p.shock.gamma_count(p.model.d())));
    for (int i = 0; i < 200; ++i) {
      dist::RandomStream s(9, static_cast<std::uint64_t>(i));
      ASSERT_EQ(law.log_likelihood_ratio(law.sample(s)), 0.0) << name;
    }
  }
}

TEST(TiltedLaw, RatioMatchesDensities) {
  const Preset p = preset("three_factor_base");
  FactorTilt t = FactorTilt::zero(3, 4);
  t.mu << 0.5, -0.2, 1.0;
  t.theta << 0.5, -0.3, 0.2, 1.0;
  t.eta << 0.1, 0.3, -0.2, 0.0;
  const TiltedLaw law(p.model, p.shock, t);
  const dist::MvnParams base(Vec::Zero(3), p.model.factor_cov);
  for (int i = 0; i < 50; ++i) {
    dist::RandomStream s(10, static_cast<std::uint64_t>(i));
    const FactorSample f = law.sample(s);
    double expected = dist::log_pdf_mvn(f.z, base) - dist::log_pdf_mvn(f.z, base.with_mean(t.mu));
    for (int j = 0; j < 4; ++j) {
      const double a = p.shock.gamma_shape(j);
      const double b = p.shock.gamma_rate(j);
      expected += dist::log_pdf_gamma(f.q[j], dist::GammaParams(a, b)) -
                  dist::log_pdf_gamma(f.q[j], dist::GammaParams(a - t.theta[j], b + t.eta[j]));
    }
    EXPECT_NEAR(law.log_likelihood_ratio(f), expected, 1e-10);
  }
}

TEST(Presets, OneFactorConstants) {
  const Preset p = preset("one_factor_t");
  EXPECT_EQ(p.model.n(), 250);
  EXPECT_EQ(p.model.d(), 1);
  for (int k = 0; k < 250; ++k) {
    ASSERT_DOUBLE_EQ(p.model.thresholds[k], 0.5 * std::sqrt(250.0));
    ASSERT_DOUBLE_EQ(p.model.loadings(k, 0), 0.25);
    ASSERT_EQ(p.model.exposures[k], 1);
  }
  EXPECT_DOUBLE_EQ(p.model.idio_std, 3.0);
  EXPECT_EQ(p.shock.sharing, Sharing::kShared);
  EXPECT_EQ(p.nu_grid, (std::vector<double>{4, 8, 12, 16, 20}));
  EXPECT_EQ(tau_from_b(250, p.b), 62);
}

TEST(Presets, ThreeFactorCovariance) {
  const Preset p = preset("three_factor_base");
  EXPECT_NEAR(p.model.factor_cov(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(p.model.factor_cov(0, 2), 0.25, 1e-15);
  EXPECT_NEAR(p.model.factor_cov(1, 2), 0.2, 1e-15);
  EXPECT_NEAR(p.model.factor_cov(1, 1), 0.64, 1e-15);
  EXPECT_EQ(p.shock.nu, (std::vector<double>{8, 6, 4, 4}));
  EXPECT_EQ(p.shock.sharing, Sharing::kIndependent);
  EXPECT_DOUBLE_EQ(p.model.loadings(17, 2), 0.1);
  const Preset g = preset("three_factor_gig");
  EXPECT_EQ(g.shock.kind, ShockKind::kGammaDirect);
  EXPECT_DOUBLE_EQ(g.shock.gamma_shape(0), 4.0);
  EXPECT_DOUBLE_EQ(g.shock.gamma_rate(3), 0.5);
  EXPECT_EQ(g.b_grid, (std::vector<double>{0.28, 0.32, 0.36}));
}

TEST(Presets, CdxLoadings) {
  const Preset p = preset("cdx_ig_8factor");
  EXPECT_EQ(p.model.n(), 125);
  EXPECT_EQ(p.model.d(), 8);
  EXPECT_EQ(p.model.direction, Direction::kBelow);
  for (int k = 0; k < p.model.n(); ++k) {
    std::multiset<double> nz;
    for (int i = 0; i < 8; ++i) {
      if (p.model.loadings(k, i) != 0.0) nz.insert(p.model.loadings(k, i));
    }
    ASSERT_EQ(nz.size(), 2u);
    ASSERT_NEAR(*nz.rbegin(), std::sqrt(0.17), 1e-12);
    ASSERT_NEAR(*nz.begin(), std::sqrt(0.06), 1e-12);
    ASSERT_NEAR(p.model.idio_loading[k], std::sqrt(1.0 - 0.23), 1e-12);
    ASSERT_NEAR(p.model.thresholds[k], -0.55 * std::sqrt(125.0), 1e-12);
  }
  EXPECT_THROW(preset("nope"), Error);
}

TEST(Exposures, Profiles) {
  const auto five = exposure_profile(ExposureKind::kFiveLevel, 250);
  EXPECT_EQ(five[249], 25);
  EXPECT_EQ(five[0], 1);
  EXPECT_EQ(std::set<std::int64_t>(five.begin(), five.end()),
            (std::set<std::int64_t>{1, 4, 9, 16, 25}));
  const auto two = exposure_profile(ExposureKind::kTwoLevel, 250);
  EXPECT_EQ(two[124], 1);
  EXPECT_EQ(two[125], 4);
  const auto eq = exposure_profile(ExposureKind::kEqual, 17);
  EXPECT_EQ(eq, std::vector<std::int64_t>(17, 1));
  EXPECT_EQ(parse_exposure_kind("five_level"), ExposureKind::kFiveLevel);
  EXPECT_THROW(parse_exposure_kind("ten_level"), Error);
}

TEST(Masks, ParseAndPrint) {
  const TiltMask m = TiltMask::parse("mu,eta");
  EXPECT_TRUE(m.mu);
  EXPECT_TRUE(m.eta);
  EXPECT_FALSE(m.theta);
  EXPECT_EQ(TiltMask::parse(m.to_string()), m);
  EXPECT_THROW(TiltMask::parse("mu,kappa"), Error);
}

// Explicit idiosyncratic draws agree with the conditional probabilities.
TEST(Simulation, DefaultFrequencyMatchesConditional) {
  for (const char* name : {"one_factor_t", "three_factor_base", "cdx_ig_8factor"}) {
    const Preset p = preset(name);
    dist::RandomStream fs(11, 0);
    const FactorSample f = sample_factors(p.model, p.shock, fs);
    const Vec q = conditional_default_probs(p.model, f);
    const double mean_p = q.mean();
    const int draws = 100000;
    double loss = 0.0;
    for (int i = 0; i < draws; ++i) {
      dist::RandomStream s(12, static_cast<std::uint64_t>(i));
      loss += static_cast<double>(simulate_loss(p.model, f, s));
    }
    // Total exposure is one per obligor in these presets.
    const double var = (q.array() * (1.0 - q.array())).sum();
    EXPECT_NEAR(loss / draws, mean_p * p.model.n(), 4.0 * std::sqrt(var / draws)) << name;
  }
}

TEST(Simulation, ExchangeableObligors) {
  const Preset p = preset("one_factor_t");
  const int samples = 20000;
  int first = 0;
  int last = 0;
  for (int i = 0; i < samples; ++i) {
    dist::RandomStream s(13, static_cast<std::uint64_t>(i));
    const FactorSample f = sample_factors(p.model, p.shock, s);
    const double sys = p.model.loadings(0, 0) * std::sqrt(f.w[0]) * f.z[0];
    const double scale = p.model.idio_loading[0] * std::sqrt(f.w[1]) * p.model.idio_std;
    first += sys + scale * s.std_normal() > p.model.thresholds[0];
    last += sys + scale * s.std_normal() > p.model.thresholds[249];
  }
  const double a = static_cast<double>(first) / samples;
  const double b = static_cast<double>(last) / samples;
  const double se = std::sqrt((a * (1 - a) + b * (1 - b)) / samples);
  EXPECT_NEAR(a, b, 4.0 * se + 1e-12);
}

TEST(Simulation, IndependentBernoulliReduction) {
  const double chi = 2.0;
  const PortfolioModel m = independent_model(50, chi, 1.5, Direction::kAbove);
  dist::RandomStream s(14, 0);
  const FactorSample f = sample_factors(m, ShockSpec::degenerate(), s);
  const Vec q = conditional_default_probs(m, f);
  for (int k = 0; k < 50; ++k) EXPECT_DOUBLE_EQ(q[k], dist::normal_tail(chi / 1.5));
}

TEST(Tau, FromFraction) {
  EXPECT_EQ(tau_from_b(250, 0.3), 75);
  EXPECT_EQ(tau_from_b(125, 0.2), 25);
  EXPECT_EQ(tau_from_b(250, 0.08), 20);
  EXPECT_EQ(tau_from_b(125, 0.01), 1);
}

}  // namespace
}  // namespace creditis::port
