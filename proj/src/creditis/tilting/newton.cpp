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

#include "creditis/tilting/newton.hpp"

#include <algorithm>
#include <cmath>

#include "creditis/common/error.hpp"

namespace creditis::tilt {

namespace {

bool is_inside(const DomainFn& inside, const Vec& x) {
  return x.allFinite() && (!inside || inside(x));
}

}  // namespace

Eigen::MatrixXd fd_jacobian(const ResidualFn& g, const Vec& x, const Vec& gx,
                            const DomainFn& inside) {
  const auto n = x.size();
  Eigen::MatrixXd jac(gx.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double h = std::max(1e-4, 1e-3 * std::fabs(x[j]));
    for (int attempt = 0;; ++attempt) {
      Vec up = x, down = x;
      up[j] += h;
      down[j] -= h;
      const bool up_ok = is_inside(inside, up);
      const bool down_ok = is_inside(inside, down);
      if (up_ok && down_ok) {
        jac.col(j) = (g(up) - g(down)) / (2.0 * h);
        break;
      }
      if (up_ok) {
        jac.col(j) = (g(up) - gx) / h;
        break;
      }
      if (down_ok) {
        jac.col(j) = (gx - g(down)) / h;
        break;
      }
      if (attempt > 30) throw NumericalError("fd_jacobian: no admissible difference step");
      h *= 0.5;
    }
  }
  return jac;
}

NewtonStep newton_step(const ResidualFn& g, const DomainFn& inside, const Vec& x,
                       const Vec& gx, int max_halvings) {
  const double norm0 = squared_norm(gx);
  NewtonStep out{x, gx, norm0, false, false};
  const Eigen::MatrixXd jac = fd_jacobian(g, x, gx, inside);

  auto line_search = [&](const Vec& direction) -> bool {
    double lambda = 1.0;
    for (int k = 0; k <= max_halvings; ++k, lambda *= 0.5) {
      const Vec trial = x - lambda * direction;
      if (!is_inside(inside, trial)) continue;
      const Vec gt = g(trial);
      if (!gt.allFinite()) continue;
      const double nt = squared_norm(gt);
      if (nt < norm0) {
        out.x = trial;
        out.g = gt;
        out.norm = nt;
        out.accepted = true;
        return true;
      }
    }
    return false;
  };

  if (jac.allFinite()) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.isInvertible()) {
      const Vec direction = lu.solve(gx);
      if (direction.allFinite() && line_search(direction)) return out;
    }
    // Steepest descent on g'g, scaled to the Gauss-Newton Cauchy length.
    const Vec grad = jac.transpose() * gx;
    const Vec jg = jac * grad;
    const double denom = jg.squaredNorm();
    if (grad.allFinite() && denom > 0.0) {
      out.gradient_fallback = true;
      if (line_search(grad * (grad.squaredNorm() / denom))) return out;
    }
  }
  return out;
}

TiltSolution newton_solve(const ResidualFn& g, const Vec& delta0,
                          const NewtonOptions& options, const DomainFn& inside) {
  if (!is_inside(inside, delta0)) {
    throw DomainError("newton_solve: initial point outside the parameter domain");
  }
  TiltSolution sol;
  sol.params = delta0;
  Vec gx = g(delta0);
  if (!gx.allFinite()) throw NumericalError("newton_solve: residual is not finite at start");
  sol.final_residual = squared_norm(gx);
  sol.residual_history.push_back(sol.final_residual);
  while (sol.final_residual >= options.eps && sol.iterations < options.max_iter) {
    const NewtonStep step = newton_step(g, inside, sol.params, gx, options.max_halvings);
    if (!step.accepted) break;
    ++sol.iterations;
    sol.params = step.x;
    gx = step.g;
    sol.final_residual = step.norm;
    sol.residual_history.push_back(step.norm);
  }
  sol.converged = sol.final_residual < options.eps;
  return sol;
}

}  // namespace creditis::tilt
