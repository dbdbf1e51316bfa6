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

#include "creditis/lossdist/lossdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "creditis/common/error.hpp"

namespace creditis::loss {

LossLattice::LossLattice(std::vector<std::int64_t> exposures) : exposures_(std::move(exposures)) {
  for (auto c : exposures_) {
    if (c < 0) throw InvalidArgument("exposures must be non-negative integers");
    total_ += c;
  }
  while (fft_size_ <= static_cast<std::size_t>(total_)) fft_size_ <<= 1;
}

void group_obligors(const Eigen::VectorXd& p, const std::vector<std::int64_t>& exposures,
                    std::vector<ObligorGroup>& groups) {
  if (static_cast<std::size_t>(p.size()) != exposures.size()) {
    throw InvalidArgument("default probabilities and exposures differ in length");
  }
  thread_local std::vector<std::pair<std::int64_t, double>> keyed;
  keyed.resize(exposures.size());
  bool sorted = true;
  for (std::size_t k = 0; k < exposures.size(); ++k) {
    const double pk = p[static_cast<Eigen::Index>(k)];
    if (!(pk >= 0.0 && pk <= 1.0)) throw InvalidArgument("default probability outside [0, 1]");
    keyed[k] = {exposures[k], pk};
    if (k > 0 && keyed[k] < keyed[k - 1]) sorted = false;
  }
  if (!sorted) std::sort(keyed.begin(), keyed.end());
  groups.clear();
  for (const auto& [c, pk] : keyed) {
    if (!groups.empty() && groups.back().exposure == c && groups.back().prob == pk) {
      ++groups.back().count;
    } else {
      groups.push_back({c, pk, 1});
    }
  }
}

namespace {

constexpr std::int64_t kDirectPowerLimit = 1000;

void trig_table(std::size_t n, std::vector<double>& cs, std::vector<double>& sn) {
  cs.resize(n);
  sn.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    cs[k] = std::cos(angle);
    sn[k] = std::sin(angle);
  }
}

Complex int_power(Complex base, std::int64_t e) {
  Complex acc(1.0, 0.0);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// b_m for m = 0..N/2; the rest follows from b_{N-m} = conj(b_m). Groups of
// up to kDirectPowerLimit obligors are raised to their count by repeated
// squaring; larger groups accumulate in log-magnitude and phase.
void product_into(const std::vector<ObligorGroup>& groups, std::size_t n,
                  const std::vector<double>& cs, const std::vector<double>& sn,
                  std::vector<double>& log_mag, std::vector<double>& phase,
                  std::vector<Complex>& out) {
  const std::size_t half = n / 2;
  out.assign(n, Complex(1.0, 0.0));
  log_mag.assign(half + 1, 0.0);
  phase.assign(half + 1, 0.0);
  bool any_log = false;
  for (const auto& g : groups) {
    if (g.prob == 0.0 || g.exposure == 0) continue;
    const std::size_t step = static_cast<std::size_t>(g.exposure) % n;
    const bool direct = g.count <= kDirectPowerLimit;
    any_log = any_log || !direct;
    std::size_t idx = 0;  // (m c) mod N
    for (std::size_t m = 0; m <= half && m < n; ++m) {
      const Complex f(1.0 - g.prob + g.prob * cs[idx], g.prob * sn[idx]);
      if (direct) {
        out[m] *= g.count == 1 ? f : int_power(f, g.count);
      } else {
        const double cnt = static_cast<double>(g.count);
        log_mag[m] += cnt * 0.5 * std::log(std::norm(f));
        phase[m] += cnt * std::arg(f);
      }
      idx += step;
      if (idx >= n) idx -= n;
    }
  }
  for (std::size_t m = 0; m <= half && m < n; ++m) {
    if (any_log) out[m] *= std::polar(std::exp(log_mag[m]), phase[m]);
    if (m > 0 && m < n - m) out[n - m] = std::conj(out[m]);
  }
}

// Entries above `support` are aliasing round-off and are dropped; a negative
// support keeps all N entries.
ConditionalLossDist finish_pmf(std::vector<Complex>& spectrum, const FftPlan& plan,
                               std::int64_t support = -1) {
  // The inverse series has the sign of a forward transform.
  plan.forward(spectrum);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  ConditionalLossDist out;
  out.pmf.resize(spectrum.size());
  double mass = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const Complex v = spectrum[k] * scale;
    if (std::fabs(v.imag()) > 1e-8) {
      throw NumericalError("loss pmf has imaginary residual " + std::to_string(v.imag()));
    }
    out.pmf[k] = v.real();
    mass += v.real();
  }
  if (std::fabs(mass - 1.0) > 1e-10) {
    throw NumericalError("loss pmf does not sum to one (" + std::to_string(mass) + ")");
  }
  if (support >= 0 && static_cast<std::size_t>(support) + 1 < out.pmf.size()) {
    out.pmf.resize(static_cast<std::size_t>(support) + 1);
  }
  for (double& q : out.pmf) q = std::max(q, 0.0);
  return out;
}

// ln(1 + e^x) without overflow.
double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Shifted default probability: logistic(logit(p) + lambda c).
double shifted_prob(double p, std::int64_t c, double lambda) {
  if (p == 0.0 || p == 1.0 || c == 0) return p;
  const double z = std::log(p) - std::log1p(-p) + lambda * static_cast<double>(c);
  return z > 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

double shifted_mean(const std::vector<ObligorGroup>& groups, double lambda) {
  double mean = 0.0;
  for (const auto& g : groups) {
    mean += static_cast<double>(g.exposure * g.count) * shifted_prob(g.prob, g.exposure, lambda);
  }
  return mean;
}

}  // namespace

std::vector<Complex> char_function_samples(const Eigen::VectorXd& p, const LossLattice& lattice) {
  std::vector<ObligorGroup> groups;
  group_obligors(p, lattice.exposures(), groups);
  std::vector<double> cs, sn, log_mag, phase;
  trig_table(lattice.fft_size(), cs, sn);
  std::vector<Complex> out;
  product_into(groups, lattice.fft_size(), cs, sn, log_mag, phase, out);
  return out;
}

Complex char_function_at(const Eigen::VectorXd& p, const std::vector<std::int64_t>& exposures,
                         double t) {
  if (static_cast<std::size_t>(p.size()) != exposures.size()) {
    throw InvalidArgument("default probabilities and exposures differ in length");
  }
  Complex prod(1.0, 0.0);
  for (std::size_t k = 0; k < exposures.size(); ++k) {
    const double pk = p[static_cast<Eigen::Index>(k)];
    prod *= Complex(1.0 - pk, 0.0) + pk * std::polar(1.0, t * static_cast<double>(exposures[k]));
  }
  return prod;
}

ConditionalLossDist invert_to_pmf(std::vector<Complex> b) {
  const FftPlan plan(b.size());
  return finish_pmf(b, plan);
}

ConditionalLossDist loss_pmf(const Eigen::VectorXd& p, const LossLattice& lattice) {
  std::vector<Complex> b = char_function_samples(p, lattice);
  const FftPlan plan(b.size());
  return finish_pmf(b, plan, lattice.total());
}

double tail_prob(const ConditionalLossDist& dist, std::int64_t tau) {
  if (tau < 0 || static_cast<std::size_t>(tau) >= dist.pmf.size()) {
    throw InvalidArgument("tail_prob: tau outside the loss lattice");
  }
  double upper = 0.0;
  for (std::size_t k = dist.pmf.size(); k-- > static_cast<std::size_t>(tau) + 1;) {
    upper += dist.pmf[k];
  }
  return std::clamp(upper, 0.0, 1.0);
}

double cdf(const ConditionalLossDist& dist, std::int64_t tau) {
  if (tau < 0 || static_cast<std::size_t>(tau) >= dist.pmf.size()) {
    throw InvalidArgument("cdf: tau outside the loss lattice");
  }
  double lower = 0.0;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(tau); ++k) lower += dist.pmf[k];
  return std::clamp(lower, 0.0, 1.0);
}

TailEvaluator::TailEvaluator(const LossLattice& lattice, std::int64_t tau)
    : lattice_(lattice), tau_(tau), plan_(lattice.fft_size()) {
  if (tau < 0 || tau > lattice.total()) {
    throw InvalidArgument("TailEvaluator: tau must lie in [0, C]");
  }
  trig_table(lattice.fft_size(), cos_, sin_);
}

void TailEvaluator::fill(const std::vector<ObligorGroup>& groups) {
  product_into(groups, lattice_.fft_size(), cos_, sin_, log_mag_, phase_, buffer_);
}

ConditionalLossDist TailEvaluator::distribution(const Eigen::VectorXd& p) {
  group_obligors(p, lattice_.exposures(), groups_);
  fill(groups_);
  return finish_pmf(buffer_, plan_, lattice_.total());
}

double TailEvaluator::operator()(const Eigen::VectorXd& p) { return std::exp(log_tail(p)); }

double TailEvaluator::log_tail(const Eigen::VectorXd& p) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  group_obligors(p, lattice_.exposures(), groups_);
  const double target = static_cast<double>(tau_) + 1.0;
  double reachable = 0.0;
  for (const auto& g : groups_) {
    if (g.prob > 0.0) reachable += static_cast<double>(g.exposure * g.count);
  }
  if (reachable < target) return kNegInf;
  if (shifted_mean(groups_, 0.0) >= target) {
    fill(groups_);
    const double t = tail_prob(finish_pmf(buffer_, plan_, lattice_.total()), tau_);
    return t > 0.0 ? std::log(t) : kNegInf;
  }

  // lambda > 0 with shifted mean tau + 1; the mean increases with lambda.
  double lo = 0.0;
  double hi = 1.0;
  while (shifted_mean(groups_, hi) < target && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (shifted_mean(groups_, mid) < target ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);

  // ln M(lambda) = sum ln(1 - p + p e^{lambda c}).
  double log_m = 0.0;
  shifted_.clear();
  for (const auto& g : groups_) {
    const double lc = lambda * static_cast<double>(g.exposure);
    const double cnt = static_cast<double>(g.count);
    if (g.prob == 1.0) {
      log_m += cnt * lc;
    } else if (g.prob > 0.0 && g.exposure > 0) {
      log_m += cnt * (std::log1p(-g.prob) +
                      log1p_exp(std::log(g.prob) - std::log1p(-g.prob) + lc));
    }
    shifted_.push_back({g.exposure, shifted_prob(g.prob, g.exposure, lambda), g.count});
  }
  fill(shifted_);
  const ConditionalLossDist q = finish_pmf(buffer_, plan_, lattice_.total());
  // sum_{k > tau} q'_k e^{-lambda (k - tau - 1)}, then undo the shift.
  const auto first = static_cast<std::size_t>(tau_) + 1;
  double acc = 0.0;
  for (std::size_t k = q.pmf.size(); k-- > first;) {
    if (q.pmf[k] > 0.0) acc += q.pmf[k] * std::exp(-lambda * static_cast<double>(k - first));
  }
  if (!(acc > 0.0)) return kNegInf;
  return std::min(0.0, log_m - lambda * target + std::log(acc));
}

}  // namespace creditis::loss
