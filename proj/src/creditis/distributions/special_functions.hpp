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

namespace creditis::dist {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_pdf(double x);
/// Standard normal CDF, absolute error below 1e-15.
double normal_cdf(double x);
/// 1 - normal_cdf(x), computed without cancellation.
double normal_tail(double x);
/// Inverse of normal_cdf on (0, 1), Wichura's AS241 (relative error ~1e-16).
double normal_quantile(double p);
/// Inverse Mills ratio phi(x) / (1 - Phi(x)).
double normal_hazard(double x);

/// Digamma function for x > 0; throws DomainError otherwise.
double digamma(double x);
/// ln Gamma(x) for x > 0; throws DomainError otherwise.
double log_gamma_fn(double x);

/// Q(shape, x) = Gamma(shape, x) / Gamma(shape).
double gamma_q(double shape, double x);
/// P(X > a) for X ~ Gamma(shape, rate).
double regularized_upper_gamma(double shape, double rate, double a);
/// P(X <= a) for X ~ Gamma(shape, rate).
double regularized_lower_gamma(double shape, double rate, double a);

}  // namespace creditis::dist
