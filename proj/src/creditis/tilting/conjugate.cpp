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

#include "creditis/tilting/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "creditis/common/error.hpp"

namespace creditis::tilt {

void Pilot::add(const Vec& stats, double payoff) {
  if (!(payoff >= 0.0) || !std::isfinite(payoff)) {
    throw InvalidArgument("pilot payoff must be finite and non-negative");
  }
  if (payoff == 0.0) {
    add_zero();
    return;
  }
  add_log(stats, 2.0 * std::log(payoff));
}

void Pilot::add_log(const Vec& stats, double log_payoff_sq) {
  stats_.push_back(stats);
  log_payoff_sq_.push_back(log_payoff_sq);
  ++total_;
}

Pilot make_pilot(const std::vector<Vec>& samples, const PayoffFn& payoff,
                 const StatisticsFn& h) {
  Pilot pilot;
  for (const auto& x : samples) pilot.add(h(x), payoff(x));
  return pilot;
}

Pilot draw_pilot(const SufficientFamily& family, const PayoffFn& payoff, std::size_t size,
                 std::uint64_t seed) {
  Pilot pilot;
  for (std::size_t i = 0; i < size; ++i) {
    dist::RandomStream stream(seed, i);
    const Vec x = family.sample_base(stream);
    const double r = payoff(x);
    if (r > 0.0) {
      pilot.add(family.statistics(x), r);
    } else {
      pilot.add_zero();
    }
  }
  return pilot;
}

std::vector<double> ConjugateWeights::normalized() const {
  double peak = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) peak = std::max(peak, lw);
  std::vector<double> w(log_weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_weights[i] - peak);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

ConjugateWeights conjugate_weights(const Pilot& pilot, const Vec& t) {
  if (pilot.active() == 0) {
    throw DegeneratePilot("no pilot sample has positive payoff; increase the pilot size");
  }
  ConjugateWeights out;
  out.log_weights.resize(pilot.active());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pilot.active(); ++i) {
    out.log_weights[i] = pilot.log_payoff_sq()[i] - t.dot(pilot.stats()[i]);
    peak = std::max(peak, out.log_weights[i]);
  }
  if (!std::isfinite(peak)) throw NumericalError("conjugate weights are not finite");
  double sum = 0.0;
  for (double lw : out.log_weights) sum += std::exp(lw - peak);
  out.log_normalizer = peak + std::log(sum) - std::log(static_cast<double>(pilot.total()));
  return out;
}

Vec conjugate_expectation(const Pilot& pilot, const Vec& t) {
  const auto weights = conjugate_weights(pilot, t).normalized();
  Vec mean = Vec::Zero(pilot.stats().front().size());
  for (std::size_t i = 0; i < weights.size(); ++i) mean += weights[i] * pilot.stats()[i];
  return mean;
}

Vec conjugate_expectation(const std::vector<Vec>& samples, const PayoffFn& payoff,
                          const StatisticsFn& h, const Vec& t) {
  return conjugate_expectation(make_pilot(samples, payoff, h), t);
}

ObjectiveEstimate objective_G(const SufficientFamily& family, const Vec& t, const Pilot& pilot) {
  if (!family.in_domain(t)) throw DomainError("objective_G: parameters outside the domain");
  const double psi = family.psi(t);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < pilot.active(); ++i) {
    const double v = std::exp(pilot.log_payoff_sq()[i] - t.dot(pilot.stats()[i]) + psi);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(pilot.total());
  ObjectiveEstimate out;
  if (n == 0.0) return out;
  out.value = sum / n;
  if (n > 1.0) {
    const double var = std::max(0.0, (sum_sq - n * out.value * out.value) / (n - 1.0));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

Vec foc_residual(const SufficientFamily& family, const Vec& t, const Pilot& pilot) {
  if (!family.in_domain(t)) throw DomainError("foc_residual: parameters outside the domain");
  return family.grad_psi(t) - conjugate_expectation(pilot, t);
}

TiltSolution solve_tilt(const SufficientFamily& family, const ConjugateFn& conj,
                        const std::vector<bool>& active, const NewtonOptions& options,
                        double margin) {
  const int dim = family.dim();
  if (static_cast<int>(active.size()) != dim) {
    throw InvalidArgument("solve_tilt: mask length does not match the family dimension");
  }
  std::vector<int> index;
  for (int i = 0; i < dim; ++i) {
    if (active[i]) index.push_back(i);
  }
  auto expand = [&](const Vec& r) {
    Vec t = Vec::Zero(dim);
    for (std::size_t k = 0; k < index.size(); ++k) t[index[k]] = r[k];
    return t;
  };
  TiltSolution sol;
  if (index.empty()) {
    sol.params = Vec::Zero(dim);
    sol.converged = true;
    return sol;
  }
  const ResidualFn g = [&](const Vec& r) {
    const Vec t = expand(r);
    const Vec full = family.grad_psi(t) - conj(t);
    Vec out(index.size());
    for (std::size_t k = 0; k < index.size(); ++k) out[k] = full[index[k]];
    return out;
  };
  const DomainFn inside = [&](const Vec& r) { return family.in_domain(expand(r), margin); };
  sol = newton_solve(g, Vec::Zero(static_cast<Eigen::Index>(index.size())), options, inside);
  sol.params = expand(sol.params);
  return sol;
}

TiltSolution solve_tilt(const SufficientFamily& family, const Pilot& pilot,
                        const std::vector<bool>& active, const NewtonOptions& options,
                        double margin) {
  return solve_tilt(
      family, [&](const Vec& t) { return conjugate_expectation(pilot, t); }, active, options,
      margin);
}

}  // namespace creditis::tilt
