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

#include "creditis/families/gamma_family.hpp"
#include "creditis/families/normal_family.hpp"

namespace creditis::fam {

/// Independent Z ~ N(0,1) and W ~ Gamma(alpha, beta); the sample is (z, w).
/// Parameters are laid out [theta_z, theta_w | eta_z, eta_w] against the
/// statistics (z, ln w, z^2, w), so theta_z tilts the mean of Z, eta_z its
/// variance, and (theta_w, eta_w) the shape and rate of W.
class NormalMixtureFamily final : public tilt::SufficientFamily {
 public:
  /// `w_support` describes the payoff as a function of w after z is
  /// integrated out; {xi sqrt(w) z > a} with a > 0 vanishes as w -> 0.
  NormalMixtureFamily(double xi, double alpha, double beta, GammaPayoffSupport w_support = {});

  double xi() const { return xi_; }
  const GammaFamily& w_family() const { return gamma_; }

  int dim_theta() const override { return 2; }
  int dim_eta() const override { return 2; }
  int sample_dim() const override { return 2; }
  std::vector<std::string> param_names() const override {
    return {"theta_z", "theta_w", "eta_z", "eta_w"};
  }

  Vec statistics(const Vec& x) const override;
  bool in_domain(const Vec& t, double margin = 0.0) const override;
  double psi(const Vec& t) const override;
  Vec grad_psi(const Vec& t) const override;
  Vec sample_base(dist::RandomStream& stream) const override;
  Vec sample_tilted(const Vec& t, dist::RandomStream& stream) const override;

  static Vec z_part(const Vec& t);
  static Vec w_part(const Vec& t);
  static Vec join(const Vec& tz, const Vec& tw);

  /// 1{xi sqrt(w) z > a}.
  double payoff(const Vec& x, double a) const;

  /// P(xi sqrt(W) Z > a) by quadrature over W.
  double tail_probability(double a) const;

 private:
  double xi_;
  NormalFamily normal_;
  GammaFamily gamma_;
};

/// Conjugate expectation of (z, ln w, z^2, w) for the event
/// {xi sqrt(w) z > a}. Z is integrated out in closed form given w and the
/// remaining one-dimensional integral over w is done by quadrature.
Vec mixture_conjugate_above(const NormalMixtureFamily& f, const Vec& t, double a);

}  // namespace creditis::fam
