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

#include "creditis/tilting/conjugate.hpp"
#include "creditis/tilting/sufficient_family.hpp"

namespace creditis::fam {

using tilt::Vec;

/// N(0,1) with statistics (x, x^2). Q_t is N(theta/(1-2 eta), 1/(1-2 eta)).
/// The domain |eta| < 1/2 also keeps the conjugate law N(-theta/(1+2 eta),
/// 1/(1+2 eta)) proper.
class NormalFamily final : public tilt::SufficientFamily {
 public:
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

  static double tilted_mean(const Vec& t) { return t[0] / (1.0 - 2.0 * t[1]); }
  static double tilted_variance(const Vec& t) { return 1.0 / (1.0 - 2.0 * t[1]); }
  /// Inverse of (tilted_mean, tilted_variance).
  static Vec from_moments(double mean, double variance);
};

/// E[(X, X^2) | X > a] under the conjugate law of `t`, in closed form.
Vec normal_conjugate_above(const Vec& t, double a);
/// Untruncated conjugate moments (payoff identically one).
Vec normal_conjugate_full(const Vec& t);

/// Mean and second moment of N(m, s^2) truncated to (c, inf).
struct TruncatedMoments {
  double mean;
  double second;
};
TruncatedMoments truncated_normal_above(double m, double s, double c);

struct NormalTilt {
  double mu = 0.0;
  double sigma = 1.0;
  tilt::TiltSolution solution;
};

/// Two-parameter optimum for the event {X > a}. Throws NumericalError when
/// the fixed point is not reached.
NormalTilt normal_tilt_fixed_point(double a);

/// Root of 2 theta = hazard(a + theta), the mean-only optimum for {X > a}.
double one_param_normal_tilt(double a);

}  // namespace creditis::fam
