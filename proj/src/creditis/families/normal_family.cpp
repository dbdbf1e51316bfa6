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

#include "creditis/families/normal_family.hpp"

#include <cmath>

#include "creditis/common/error.hpp"
#include "creditis/distributions/samplers.hpp"
#include "creditis/distributions/special_functions.hpp"

namespace creditis::fam {

Vec NormalFamily::statistics(const Vec& x) const {
  Vec h(2);
  h << x[0], x[0] * x[0];
  return h;
}

bool NormalFamily::in_domain(const Vec& t, double margin) const {
  return t.size() == 2 && t.allFinite() && 1.0 - 2.0 * t[1] > 2.0 * margin &&
         1.0 + 2.0 * t[1] > 2.0 * margin;
}

double NormalFamily::psi(const Vec& t) const {
  if (!in_domain(t)) throw DomainError("normal psi: eta must lie in (-1/2, 1/2)");
  const double k = 1.0 - 2.0 * t[1];
  return -0.5 * std::log(k) + t[0] * t[0] / (2.0 * k);
}

Vec NormalFamily::grad_psi(const Vec& t) const {
  if (!in_domain(t)) throw DomainError("normal grad_psi: eta must lie in (-1/2, 1/2)");
  const double mu = tilted_mean(t);
  const double var = tilted_variance(t);
  Vec g(2);
  g << mu, var + mu * mu;
  return g;
}

Vec NormalFamily::sample_base(dist::RandomStream& stream) const {
  Vec x(1);
  x[0] = dist::sample_std_normal(stream);
  return x;
}

Vec NormalFamily::sample_tilted(const Vec& t, dist::RandomStream& stream) const {
  if (!in_domain(t)) throw DomainError("normal sample_tilted: parameters outside the domain");
  Vec x(1);
  x[0] = tilted_mean(t) + std::sqrt(tilted_variance(t)) * dist::sample_std_normal(stream);
  return x;
}

Vec NormalFamily::from_moments(double mean, double variance) {
  if (!(variance > 0.0)) throw DomainError("normal from_moments: variance must be positive");
  Vec t(2);
  t << mean / variance, 0.5 * (1.0 - 1.0 / variance);
  return t;
}

TruncatedMoments truncated_normal_above(double m, double s, double c) {
  const double alpha = (c - m) / s;
  const double lambda = dist::normal_hazard(alpha);
  const double mean = m + s * lambda;
  const double var = s * s * (1.0 + alpha * lambda - lambda * lambda);
  return {mean, var + mean * mean};
}

Vec normal_conjugate_above(const Vec& t, double a) {
  const double k = 1.0 + 2.0 * t[1];
  if (!(k > 0.0)) throw DomainError("normal conjugate: eta must exceed -1/2");
  const auto tm = truncated_normal_above(-t[0] / k, 1.0 / std::sqrt(k), a);
  Vec out(2);
  out << tm.mean, tm.second;
  return out;
}

Vec normal_conjugate_full(const Vec& t) {
  const double k = 1.0 + 2.0 * t[1];
  if (!(k > 0.0)) throw DomainError("normal conjugate: eta must exceed -1/2");
  const double m = -t[0] / k;
  Vec out(2);
  out << m, 1.0 / k + m * m;
  return out;
}

NormalTilt normal_tilt_fixed_point(double a) {
  if (!std::isfinite(a)) throw InvalidArgument("normal_tilt_fixed_point: threshold must be finite");
  NormalFamily family;
  tilt::NewtonOptions opts;
  opts.eps = 1e-24;
  opts.max_iter = 200;
  const auto conj = [a](const Vec& t) { return normal_conjugate_above(t, a); };
  NormalTilt out;
  out.solution = tilt::solve_tilt(family, conj, {true, true}, opts);
  if (out.solution.final_residual > 1e-18) {
    throw NumericalError("normal_tilt_fixed_point: no convergence at a = " + std::to_string(a) +
                         ", g'g = " + std::to_string(out.solution.final_residual));
  }
  out.mu = NormalFamily::tilted_mean(out.solution.params);
  out.sigma = std::sqrt(NormalFamily::tilted_variance(out.solution.params));
  return out;
}

double one_param_normal_tilt(double a) {
  // f is increasing in theta: 2 theta grows faster than the hazard, whose
  // slope lies in (0, 1).
  const auto f = [a](double th) { return 2.0 * th - dist::normal_hazard(a + th); };
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-3; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  double th = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double z = a + th;
    const double lam = dist::normal_hazard(z);
    const double slope = 2.0 - lam * (lam - z);
    const double next = th - f(th) / slope;
    if (!(next > lo && next < hi)) break;
    const bool done = std::fabs(next - th) < 1e-14;
    th = next;
    if (done) break;
  }
  return th;
}

}  // namespace creditis::fam
