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

#include <limits>

#include "creditis/tilting/sufficient_family.hpp"

namespace creditis::fam {

using tilt::Vec;

/// Where the payoff vanishes. A payoff that is zero near 0 (or for large x)
/// makes the conjugate integral converge there whatever the shape (or rate).
struct GammaPayoffSupport {
  bool away_from_zero = false;
  bool bounded = false;
};

/// Gamma(alpha, beta) with statistics (ln x, x). Q_t is
/// Gamma(alpha + theta, beta - eta); the conjugate measure has density
/// proportional to payoff^2 x^(alpha - theta - 1) e^{-(beta + eta) x}. The
/// domain keeps Q_t proper and the conjugate measure finite for the given
/// payoff support; with the default support both laws must be proper.
class GammaFamily final : public tilt::SufficientFamily {
 public:
  GammaFamily(double alpha, double beta, GammaPayoffSupport support = {});
  const GammaPayoffSupport& support() const { return support_; }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  int dim_theta() const override { return 1; }
  int dim_eta() const override { return 1; }
  int sample_dim() const override { return 1; }
  std::vector<std::string> param_names() const override { return {"theta", "eta"}; }

  Vec statistics(const Vec& x) const override;
  bool in_domain(const Vec& t, double margin = 0.0) const override;
  double psi(const Vec& t) const override;
  Vec grad_psi(const Vec& t) const override;
  Vec sample_base(dist::RandomStream& stream) const override;
  Vec sample_tilted(const Vec& t, dist::RandomStream& stream) const override;

 private:
  double alpha_;
  double beta_;
  GammaPayoffSupport support_;
};

/// E[(ln X, X) | lo < X < hi] for the measure x^(shape-1) e^{-rate x} on
/// (lo, hi). `hi` may be infinite and `lo` zero. The shape may be
/// non-positive when lo > 0 and the rate non-positive when hi is finite.
Vec gamma_truncated_stats(double shape, double rate, double lo,
                          double hi = std::numeric_limits<double>::infinity());

/// Conjugate expectation of (ln X, X) restricted to (lo, hi) for the family
/// `f` at tilt `t`.
Vec gamma_conjugate_interval(const GammaFamily& f, const Vec& t, double lo, double hi);

}  // namespace creditis::fam
