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
#include <string>
#include <vector>

#include "creditis/distributions/random_stream.hpp"

namespace creditis::tilt {

using Vec = Eigen::VectorXd;

/// An exponential family P together with its sufficient tilting
///
///   dQ_t/dP (x) = exp(t . h(x) - psi(t)),   t = (theta, eta),
///
/// where h = (h1, h2) stacks the two blocks of sufficient statistics. The
/// parameter vector is laid out as [theta (dim_theta) | eta (dim_eta)].
/// Implementations must return psi(0) == 0 exactly so the zero tilt yields a
/// likelihood ratio of exactly one.
class SufficientFamily {
 public:
  virtual ~SufficientFamily() = default;

  virtual int dim_theta() const = 0;
  virtual int dim_eta() const = 0;
  int dim() const { return dim_theta() + dim_eta(); }
  /// Dimension of a sample x.
  virtual int sample_dim() const = 0;
  virtual std::vector<std::string> param_names() const = 0;

  virtual Vec statistics(const Vec& x) const = 0;
  /// True when psi is finite at `t` with every steepness boundary at least
  /// `margin` away.
  virtual bool in_domain(const Vec& t, double margin = 0.0) const = 0;
  /// Cumulant function; throws DomainError outside the domain.
  virtual double psi(const Vec& t) const = 0;
  virtual Vec grad_psi(const Vec& t) const = 0;

  virtual Vec sample_base(dist::RandomStream& stream) const = 0;
  virtual Vec sample_tilted(const Vec& t, dist::RandomStream& stream) const = 0;

  /// ln(dP/dQ_t)(x) = -t . h(x) + psi(t).
  double log_likelihood_ratio(const Vec& t, const Vec& x) const {
    return -t.dot(statistics(x)) + psi(t);
  }
};

}  // namespace creditis::tilt
