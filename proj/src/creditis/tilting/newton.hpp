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

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace creditis::tilt {

using Vec = Eigen::VectorXd;
using ResidualFn = std::function<Vec(const Vec&)>;
/// Returns true when the point lies strictly inside the admissible region.
using DomainFn = std::function<bool(const Vec&)>;

struct NewtonOptions {
  double eps = 1e-4;  // on g'g
  int max_iter = 20;
  int max_halvings = 40;
};

/// Result of a root search for the first-order conditions.
struct TiltSolution {
  Vec params;
  int iterations = 0;
  double final_residual = 0.0;  // g'g at `params`
  bool converged = false;
  std::vector<double> residual_history;  // g'g after each accepted step, [0] at start
};

inline double squared_norm(const Vec& g) { return g.squaredNorm(); }

/// Central differences with step max(1e-4, 1e-3 |x_i|); falls back to a
/// one-sided quotient when one of the two points leaves the domain.
Eigen::MatrixXd fd_jacobian(const ResidualFn& g, const Vec& x, const Vec& gx,
                            const DomainFn& inside);

struct NewtonStep {
  Vec x;
  Vec g;
  double norm = 0.0;
  bool accepted = false;
  bool gradient_fallback = false;
};

/// One damped Newton step from (x, gx). The step is halved until the iterate
/// is inside the domain and g'g strictly decreases. A singular Jacobian
/// switches to steepest descent on g'g.
NewtonStep newton_step(const ResidualFn& g, const DomainFn& inside, const Vec& x,
                       const Vec& gx, int max_halvings);

TiltSolution newton_solve(const ResidualFn& g, const Vec& delta0,
                          const NewtonOptions& options, const DomainFn& inside = {});

}  // namespace creditis::tilt
