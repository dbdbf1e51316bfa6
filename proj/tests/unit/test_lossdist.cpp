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
#include <numeric>

#include "creditis/common/error.hpp"
#include "creditis/distributions/random_stream.hpp"
#include "creditis/lossdist/fft.hpp"
#include "creditis/lossdist/lossdist.hpp"
#include "creditis/lossdist/oracles.hpp"
#include "creditis/portfolio/model.hpp"

namespace creditis::loss {
namespace {

using Eigen::VectorXd;

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    m = std::max(m, std::fabs(x - y));
  }
  return m;
}

ConditionalLossDist fft_pmf(const VectorXd& p, const std::vector<std::int64_t>& c) {
  return loss_pmf(p, LossLattice(c));
}

TEST(Fft, MatchesNaiveDft) {
  const std::size_t n = 64;
  FftPlan plan(n);
  dist::RandomStream s(1, 1);
  std::vector<Complex> x(n);
  for (auto& v : x) v = {s.uniform() - 0.5, s.uniform() - 0.5};
  std::vector<Complex> y = x;
  plan.forward(y);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      acc += x[m] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * m) / n);
    }
    EXPECT_NEAR(std::abs(acc - y[k]), 0.0, 1e-12);
  }
  plan.inverse(y);
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(std::abs(y[k] - x[k]), 0.0, 1e-14);
  EXPECT_THROW(FftPlan(48), InvalidArgument);
}

TEST(Lattice, SmallestPowerOfTwoAboveTotal) {
  EXPECT_EQ(LossLattice(std::vector<std::int64_t>(250, 1)).fft_size(), 256u);
  EXPECT_EQ(LossLattice(std::vector<std::int64_t>(256, 1)).fft_size(), 512u);
  EXPECT_EQ(LossLattice({1, 2}).fft_size(), 4u);
  EXPECT_THROW(LossLattice({1, -2}), InvalidArgument);
}

TEST(CharFunction, NoDefaults) {
  const LossLattice lat(std::vector<std::int64_t>(10, 3));
  const auto b = char_function_samples(VectorXd::Zero(10), lat);
  for (const auto& v : b) EXPECT_NEAR(std::abs(v - Complex(1.0, 0.0)), 0.0, 1e-15);
  const auto q = invert_to_pmf(b);
  EXPECT_NEAR(q.pmf[0], 1.0, 1e-12);
  for (std::size_t k = 1; k < q.pmf.size(); ++k) EXPECT_NEAR(q.pmf[k], 0.0, 1e-12);
}

TEST(CharFunction, SingleObligorHandValue) {
  VectorXd p(1);
  p << 0.5;
  const auto b = char_function_samples(p, LossLattice({1}));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_NEAR(std::abs(b[0] - Complex(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b[1]), 0.0, 1e-15);
}

TEST(CharFunction, PeriodicAndMatchesDirectProduct) {
  dist::RandomStream s(2, 2);
  const int n = 30;
  VectorXd p(n);
  std::vector<std::int64_t> c(n);
  for (int k = 0; k < n; ++k) {
    p[k] = s.uniform();
    c[k] = 1 + static_cast<std::int64_t>(s.next_u32() % 5);
  }
  const LossLattice lat(c);
  const auto b = char_function_samples(p, lat);
  const double n_fft = static_cast<double>(lat.fft_size());
  for (std::size_t m = 0; m < b.size(); m += 7) {
    const double t = 2.0 * M_PI * static_cast<double>(m) / n_fft;
    EXPECT_NEAR(std::abs(char_function_at(p, c, t) - b[m]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(char_function_at(p, c, t + 2.0 * M_PI) - char_function_at(p, c, t)),
                0.0, 1e-12);
  }
}

TEST(CharFunction, LargeGroupsUseLogPhase) {
  // 5000 identical obligors exceed the direct-power threshold.
  const int n = 5000;
  const VectorXd p = VectorXd::Constant(n, 0.01);
  const auto q = fft_pmf(p, std::vector<std::int64_t>(n, 1));
  const auto ref = binomial_pmf_oracle(n, 0.01);
  EXPECT_LE(max_diff(q.pmf, ref), 1e-10);
}

TEST(Oracles, BinomialReferenceValues) {
  EXPECT_NEAR(binomial_cdf_oracle(250, 0.1, 20), 1.72e-1, 5e-4);
  EXPECT_NEAR(binomial_cdf_oracle(250, 0.1, 10) / 3.53e-4, 1.0, 2e-3);
  EXPECT_NEAR(binomial_cdf_oracle(250, 0.1, 5) / 5.84e-7, 1.0, 2e-3);
  EXPECT_NEAR(binomial_tail_oracle(250, 0.1, 20) + binomial_cdf_oracle(250, 0.1, 20), 1.0, 1e-15);
}

TEST(Oracles, BinomialAgainstDirectSum) {
  // Independent oracle: log-space binomial coefficients.
  const int n = 60;
  const double p = 0.3;
  const auto pmf = binomial_pmf_oracle(n, p);
  for (int k = 0; k <= n; ++k) {
    const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double v = std::exp(lg + k * std::log(p) + (n - k) * std::log1p(-p));
    EXPECT_NEAR(pmf[k] / v, 1.0, 1e-12) << k;
  }
}

TEST(Oracles, ConvolutionHandEnumeration) {
  VectorXd p(2);
  p << 0.5, 0.5;
  const auto q = convolution_oracle(p, {1, 2});
  ASSERT_GE(q.pmf.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(q.pmf[k], 0.25, 1e-15);
}

TEST(Inversion, MatchesBinomial) {
  for (int n : {50, 250}) {
    for (double p : {0.01, 0.1, 0.5}) {
      const auto q = fft_pmf(VectorXd::Constant(n, p), std::vector<std::int64_t>(n, 1));
      EXPECT_LE(max_diff(q.pmf, binomial_pmf_oracle(n, p)), 1e-10) << n << " " << p;
      EXPECT_EQ(q.source, PmfSource::kFft);
    }
  }
}

TEST(Inversion, MatchesConvolutionOnRandomInstances) {
  dist::RandomStream s(3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(s.next_u32() % 20);
    VectorXd p(n);
    std::vector<std::int64_t> c(n);
    std::int64_t total = 0;
    for (int k = 0; k < n; ++k) {
      p[k] = s.uniform();
      c[k] = static_cast<std::int64_t>(s.next_u32() % 4);
      if (total + c[k] > 64) c[k] = 0;
      total += c[k];
    }
    const auto q = fft_pmf(p, c);
    const auto ref = convolution_oracle(p, c);
    ASSERT_LE(max_diff(q.pmf, ref.pmf), 1e-10) << trial;
    const double mass = std::accumulate(q.pmf.begin(), q.pmf.end(), 0.0);
    ASSERT_NEAR(mass, 1.0, 1e-10);
    for (double v : q.pmf) ASSERT_GE(v, 0.0);
  }
}

TEST(Inversion, FiveLevelReferenceCdf) {
  const int n = 250;
  const auto c = port::exposure_profile(port::ExposureKind::kFiveLevel, n);
  const VectorXd p = VectorXd::Constant(n, 0.1);
  const auto q = fft_pmf(p, c);
  const auto ref = convolution_oracle(p, c);
  EXPECT_LE(max_diff(q.pmf, ref.pmf), 1e-10);
  EXPECT_NEAR(cdf(q, 200), cdf(ref, 200), 1e-6);
  EXPECT_NEAR(cdf(q, 200), 1.29e-1, 1e-3);
}

TEST(Inversion, RejectsNonHermitianInput) {
  std::vector<Complex> b(8, Complex(0.0, 0.0));
  b[0] = 1.0;
  b[1] = Complex(0.0, 0.5);
  EXPECT_THROW(invert_to_pmf(b), NumericalError);
  std::vector<Complex> bad(6, Complex(1.0, 0.0));
  EXPECT_THROW(invert_to_pmf(bad), Error);
}

TEST(Tail, EdgesAndRange) {
  const auto q = fft_pmf(VectorXd::Constant(20, 0.3), std::vector<std::int64_t>(20, 1));
  EXPECT_EQ(tail_prob(q, 20), 0.0);
  EXPECT_NEAR(tail_prob(q, 0), 1.0 - std::pow(0.7, 20), 1e-12);
  EXPECT_THROW(tail_prob(q, static_cast<std::int64_t>(q.pmf.size())), InvalidArgument);
  EXPECT_THROW(tail_prob(q, -1), InvalidArgument);
}

TEST(Tail, MonotoneInTauAndProbabilities) {
  dist::RandomStream s(4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 12;
    VectorXd p(n);
    std::vector<std::int64_t> c(n);
    for (int k = 0; k < n; ++k) {
      p[k] = 0.5 * s.uniform();
      c[k] = 1 + static_cast<std::int64_t>(s.next_u32() % 4);
    }
    const auto q = fft_pmf(p, c);
    const std::int64_t total = LossLattice(c).total();
    for (std::int64_t t = 1; t <= total; ++t) {
      ASSERT_LE(tail_prob(q, t), tail_prob(q, t - 1) + 1e-15);
    }
    const int j = static_cast<int>(s.next_u32() % n);
    VectorXd up = p;
    up[j] += 0.2;
    const auto qu = fft_pmf(up, c);
    for (std::int64_t t = 0; t <= total; ++t) ASSERT_GE(tail_prob(qu, t), tail_prob(q, t) - 1e-15);
  }
}

TEST(TailEvaluator, AgreesWithOracles) {
  const int n = 250;
  const auto c = port::exposure_profile(port::ExposureKind::kTwoLevel, n);
  dist::RandomStream s(5, 5);
  VectorXd p(n);
  for (int k = 0; k < n; ++k) p[k] = 0.02 + 0.1 * s.uniform();
  const auto ref = convolution_oracle(p, c);
  for (std::int64_t tau : {10, 60, 150, 300}) {
    TailEvaluator ev(LossLattice(c), tau);
    const double exact = tail_prob(ref, tau);
    EXPECT_NEAR(ev(p) / exact, 1.0, 1e-8) << tau;
    EXPECT_NEAR(ev.log_tail(p), std::log(exact), 1e-8) << tau;
  }
}

TEST(TailEvaluator, DeepTailKeepsRelativeAccuracy) {
  // Binomial(250, 0.01): P(L > 60) is about 1e-60, far below round-off.
  const int n = 250;
  const VectorXd p = VectorXd::Constant(n, 0.01);
  TailEvaluator ev(LossLattice(std::vector<std::int64_t>(n, 1)), 60);
  const double exact = binomial_tail_oracle(n, 0.01, 60);
  ASSERT_GT(exact, 0.0);
  EXPECT_NEAR(ev.log_tail(p), std::log(exact), 1e-8);
}

TEST(TailEvaluator, ImpossibleAndCertainEvents) {
  const int n = 10;
  TailEvaluator ev(LossLattice(std::vector<std::int64_t>(n, 1)), 10);
  EXPECT_EQ(ev(VectorXd::Constant(n, 0.5)), 0.0);
  EXPECT_EQ(ev.log_tail(VectorXd::Constant(n, 0.5)), -std::numeric_limits<double>::infinity());
  TailEvaluator zero(LossLattice(std::vector<std::int64_t>(n, 1)), 0);
  EXPECT_NEAR(zero(VectorXd::Constant(n, 1.0)), 1.0, 1e-15);
  EXPECT_EQ(zero(VectorXd::Zero(n)), 0.0);
}

TEST(Grouping, MergesIdenticalObligors) {
  VectorXd p(5);
  p << 0.1, 0.2, 0.1, 0.1, 0.2;
  std::vector<ObligorGroup> groups;
  group_obligors(p, {1, 1, 1, 2, 1}, groups);
  std::int64_t count = 0;
  for (const auto& g : groups) count += g.count;
  EXPECT_EQ(groups.size(), 3u);
  EXPECT_EQ(count, 5);
  p[0] = 1.5;
  EXPECT_THROW(group_obligors(p, {1, 1, 1, 2, 1}, groups), InvalidArgument);
}

}  // namespace
}  // namespace creditis::loss
