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

#include "creditis/families/gamma_family.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "creditis/common/error.hpp"
#include "creditis/distributions/samplers.hpp"
#include "creditis/distributions/special_functions.hpp"

namespace creditis::fam {

GammaFamily::GammaFamily(double alpha, double beta, GammaPayoffSupport support)
    : alpha_(alpha), beta_(beta), support_(support) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw DomainError("GammaFamily: shape and rate must be positive");
  }
}

Vec GammaFamily::statistics(const Vec& x) const {
  if (!(x[0] > 0.0)) throw DomainError("GammaFamily: sample must be positive");
  Vec h(2);
  h << std::log(x[0]), x[0];
  return h;
}

bool GammaFamily::in_domain(const Vec& t, double margin) const {
  return t.size() == 2 && t.allFinite() && alpha_ + t[0] > margin && beta_ - t[1] > margin &&
         (support_.away_from_zero || alpha_ - t[0] > margin) &&
         (support_.bounded || beta_ + t[1] > margin);
}

double GammaFamily::psi(const Vec& t) const {
  if (!in_domain(t)) throw DomainError("gamma psi: parameters outside the domain");
  const double s = alpha_ + t[0];
  return dist::log_gamma_fn(s) - dist::log_gamma_fn(alpha_) - s * std::log(beta_ - t[1]) +
         alpha_ * std::log(beta_);
}

Vec GammaFamily::grad_psi(const Vec& t) const {
  if (!in_domain(t)) throw DomainError("gamma grad_psi: parameters outside the domain");
  const double s = alpha_ + t[0];
  const double r = beta_ - t[1];
  Vec g(2);
  g << dist::digamma(s) - std::log(r), s / r;
  return g;
}

Vec GammaFamily::sample_base(dist::RandomStream& stream) const {
  Vec x(1);
  x[0] = dist::sample_gamma(dist::GammaParams(alpha_, beta_), stream);
  return x;
}

Vec GammaFamily::sample_tilted(const Vec& t, dist::RandomStream& stream) const {
  if (!in_domain(t)) throw DomainError("gamma sample_tilted: parameters outside the domain");
  Vec x(1);
  x[0] = dist::sample_gamma(dist::GammaParams(alpha_ + t[0], beta_ - t[1]), stream);
  return x;
}

Vec gamma_truncated_stats(double shape, double rate, double lo, double hi) {
  const bool upper_open = std::isinf(hi);
  if (!std::isfinite(shape) || !std::isfinite(rate) || !(lo >= 0.0) || !(hi > lo) ||
      (lo == 0.0 && !(shape > 0.0)) || (upper_open && !(rate > 0.0))) {
    throw DomainError("gamma_truncated_stats: measure is not finite on the interval");
  }
  if (upper_open && lo == 0.0) {
    Vec out(2);
    out << dist::digamma(shape) - std::log(rate), shape / rate;
    return out;
  }
  // Both moments by quadrature against the unnormalised density, scaled by
  // its value at the interval's mode. Incomplete-gamma differences underflow
  // once the tilted shape moves the interval far into a tail.
  double peak = lo;
  if (shape > 1.0) {
    peak = rate > 0.0 ? (shape - 1.0) / rate : hi;
  } else if (shape == 1.0 && rate < 0.0) {
    peak = hi;
  } else if (shape < 1.0 && rate < 0.0) {
    // Decreasing then increasing; take the larger end.
    const double at_hi = (shape - 1.0) * std::log(hi) - rate * hi;
    const double at_lo = lo > 0.0 ? (shape - 1.0) * std::log(lo) - rate * lo : at_hi + 1.0;
    peak = at_hi > at_lo ? hi : lo;
  }
  peak = std::clamp(peak, lo, upper_open ? std::max(lo, peak) : hi);
  const double log_peak =
      peak > 0.0 ? (shape - 1.0) * std::log(peak) - rate * peak : 0.0;
  auto density = [&](double x) {
    if (!(x > 0.0)) return 0.0;
    return std::exp((shape - 1.0) * std::log(x) - rate * x - log_peak);
  };
  double num = 0.0;
  double first = 0.0;
  double den = 0.0;
  if (upper_open) {
    boost::math::quadrature::exp_sinh<double> integrator;
    num = integrator.integrate([&](double x) { return std::log(x) * density(x); }, lo,
                               std::numeric_limits<double>::infinity());
    first = integrator.integrate([&](double x) { return x * density(x); }, lo,
                                 std::numeric_limits<double>::infinity());
    den = integrator.integrate(density, lo, std::numeric_limits<double>::infinity());
  } else {
    boost::math::quadrature::tanh_sinh<double> integrator;
    num = integrator.integrate([&](double x) { return std::log(x) * density(x); }, lo, hi);
    first = integrator.integrate([&](double x) { return x * density(x); }, lo, hi);
    den = integrator.integrate(density, lo, hi);
  }
  if (!(den > 0.0) || !std::isfinite(num) || !std::isfinite(first)) {
    throw NumericalError("gamma_truncated_stats: quadrature failed");
  }
  Vec out(2);
  out << num / den, first / den;
  return out;
}

Vec gamma_conjugate_interval(const GammaFamily& f, const Vec& t, double lo, double hi) {
  if (!f.in_domain(t)) throw DomainError("gamma conjugate: parameters outside the domain");
  return gamma_truncated_stats(f.alpha() - t[0], f.beta() + t[1], lo, hi);
}

}  // namespace creditis::fam
