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
#include <functional>
#include <vector>

#include "creditis/tilting/newton.hpp"
#include "creditis/tilting/sufficient_family.hpp"

namespace creditis::tilt {

using PayoffFn = std::function<double(const Vec&)>;
using StatisticsFn = std::function<Vec(const Vec&)>;

/// Pilot sample drawn under P, reduced to what the conjugate measure needs:
/// sufficient statistics and 2 ln(payoff) for the samples with positive
/// payoff. Zero-payoff samples only contribute to the count.
class Pilot {
 public:
  Pilot() = default;

  void add(const Vec& stats, double payoff);
  void add_log(const Vec& stats, double log_payoff_sq);
  void add_zero() { ++total_; }

  std::size_t total() const { return total_; }
  std::size_t active() const { return log_payoff_sq_.size(); }
  const std::vector<Vec>& stats() const { return stats_; }
  const std::vector<double>& log_payoff_sq() const { return log_payoff_sq_; }

 private:
  std::vector<Vec> stats_;
  std::vector<double> log_payoff_sq_;
  std::size_t total_ = 0;
};

Pilot make_pilot(const std::vector<Vec>& samples, const PayoffFn& payoff,
                 const StatisticsFn& h);

/// Draws `size` base samples from `family`, sample i on stream (seed, i).
Pilot draw_pilot(const SufficientFamily& family, const PayoffFn& payoff, std::size_t size,
                 std::uint64_t seed);

struct ConjugateWeights {
  std::vector<double> log_weights;  // 2 ln payoff_i - t . h_i over active samples
  double log_normalizer = 0.0;      // ln of the mean weight over the whole pilot

  /// Self-normalized weights; they sum to one.
  std::vector<double> normalized() const;
};

/// Throws DegeneratePilot when the pilot has no positive payoff.
ConjugateWeights conjugate_weights(const Pilot& pilot, const Vec& t);

/// E under the conjugate measure (density proportional to payoff^2 e^{-t.h})
/// of the sufficient statistics, estimated by self-normalization.
Vec conjugate_expectation(const Pilot& pilot, const Vec& t);

Vec conjugate_expectation(const std::vector<Vec>& samples, const PayoffFn& payoff,
                          const StatisticsFn& h, const Vec& t);

struct ObjectiveEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Pilot estimate of G(t) = E_P[payoff^2 exp(-t.h + psi(t))]. Throws
/// DomainError outside the family domain.
ObjectiveEstimate objective_G(const SufficientFamily& family, const Vec& t, const Pilot& pilot);

/// grad psi(t) - E_conj[h].
Vec foc_residual(const SufficientFamily& family, const Vec& t, const Pilot& pilot);

/// Expectation of the sufficient statistics under the conjugate measure at
/// the full parameter vector t.
using ConjugateFn = std::function<Vec(const Vec&)>;

/// Solves grad psi(t) = conj(t) over the coordinates selected by `active`,
/// keeping the others at zero. Starts at zero tilt.
TiltSolution solve_tilt(const SufficientFamily& family, const ConjugateFn& conj,
                        const std::vector<bool>& active, const NewtonOptions& options,
                        double margin = 1e-6);

TiltSolution solve_tilt(const SufficientFamily& family, const Pilot& pilot,
                        const std::vector<bool>& active, const NewtonOptions& options,
                        double margin = 1e-6);

}  // namespace creditis::tilt
