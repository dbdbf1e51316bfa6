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

#include "creditis/distributions/samplers.hpp"
#include "creditis/tilting/sufficient_family.hpp"

namespace creditis::fam {

using tilt::Vec;

/// N(0, I_d) tilted through (theta, M), where M has eta_1..eta_d on the
/// diagonal and eta_{d+1} everywhere off it. Statistics are
/// (x, x_1^2..x_d^2, sum_{j != k} x_j x_k), so t . h = theta'x + x'Mx and
/// Q_t = N((I - 2M)^{-1} theta, (I - 2M)^{-1}).
class MvnFamily final : public tilt::SufficientFamily {
 public:
  explicit MvnFamily(int d);

  int d() const { return d_; }
  int dim_theta() const override { return d_; }
  int dim_eta() const override { return d_ + 1; }
  int sample_dim() const override { return d_; }
  std::vector<std::string> param_names() const override;

  Vec statistics(const Vec& x) const override;
  /// Both I - 2M and I + 2M must have smallest eigenvalue above 2 * margin.
  bool in_domain(const Vec& t, double margin = 0.0) const override;
  double psi(const Vec& t) const override;
  Vec grad_psi(const Vec& t) const override;
  Vec sample_base(dist::RandomStream& stream) const override;
  Vec sample_tilted(const Vec& t, dist::RandomStream& stream) const override;

  Eigen::MatrixXd m_matrix(const Vec& t) const;
  /// d M / d eta_i for i = 1..d+1 (one-based, as in the stencil).
  Eigen::MatrixXd grad_m(int i) const;
  dist::MvnParams tilted_law(const Vec& t) const;
  /// Inverse of tilted_law: reads eta_{d+1} from entry (0, 1) of Sigma^{-1}.
  Vec from_moments(const Vec& mean, const Eigen::MatrixXd& cov) const;

 private:
  int d_;
};

}  // namespace creditis::fam
