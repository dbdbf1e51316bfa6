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

#include "creditis/families/mixture_family.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "creditis/common/error.hpp"
#include "creditis/distributions/samplers.hpp"
#include "creditis/distributions/special_functions.hpp"

namespace creditis::fam {

NormalMixtureFamily::NormalMixtureFamily(double xi, double alpha, double beta,
                                         GammaPayoffSupport w_support)
    : xi_(xi), gamma_(alpha, beta, w_support) {
  if (!(xi > 0.0)) throw DomainError("NormalMixtureFamily: xi must be positive");
}

Vec NormalMixtureFamily::z_part(const Vec& t) {
  Vec out(2);
  out << t[0], t[2];
  return out;
}

Vec NormalMixtureFamily::w_part(const Vec& t) {
  Vec out(2);
  out << t[1], t[3];
  return out;
}

Vec NormalMixtureFamily::join(const Vec& tz, const Vec& tw) {
  Vec t(4);
  t << tz[0], tw[0], tz[1], tw[1];
  return t;
}

Vec NormalMixtureFamily::statistics(const Vec& x) const {
  if (!(x[1] > 0.0)) throw DomainError("NormalMixtureFamily: w must be positive");
  Vec h(4);
  h << x[0], std::log(x[1]), x[0] * x[0], x[1];
  return h;
}

bool NormalMixtureFamily::in_domain(const Vec& t, double margin) const {
  return t.size() == 4 && normal_.in_domain(z_part(t), margin) &&
         gamma_.in_domain(w_part(t), margin);
}

double NormalMixtureFamily::psi(const Vec& t) const {
  return normal_.psi(z_part(t)) + gamma_.psi(w_part(t));
}

Vec NormalMixtureFamily::grad_psi(const Vec& t) const {
  const Vec gz = normal_.grad_psi(z_part(t));
  const Vec gw = gamma_.grad_psi(w_part(t));
  return join(gz, gw);
}

Vec NormalMixtureFamily::sample_base(dist::RandomStream& stream) const {
  Vec x(2);
  x[0] = normal_.sample_base(stream)[0];
  x[1] = gamma_.sample_base(stream)[0];
  return x;
}

Vec NormalMixtureFamily::sample_tilted(const Vec& t, dist::RandomStream& stream) const {
  Vec x(2);
  x[0] = normal_.sample_tilted(z_part(t), stream)[0];
  x[1] = gamma_.sample_tilted(w_part(t), stream)[0];
  return x;
}

double NormalMixtureFamily::payoff(const Vec& x, double a) const {
  return xi_ * std::sqrt(x[1]) * x[0] > a ? 1.0 : 0.0;
}

namespace {

double gamma_density(double w, double shape, double rate) {
  if (!(w > 0.0)) return 0.0;
  return std::exp(dist::log_pdf_gamma(w, dist::GammaParams(shape, rate)));
}

double log_normal_tail(double x) {
  if (x < 5.0) return std::log(dist::normal_tail(x));
  return -0.5 * x * x - 0.5 * std::log(2.0 * M_PI) - std::log(dist::normal_hazard(x));
}

}  // namespace

double NormalMixtureFamily::tail_probability(double a) const {
  boost::math::quadrature::exp_sinh<double> integrator;
  const double s = gamma_.alpha();
  const double r = gamma_.beta();
  return integrator.integrate(
      [&](double w) {
        if (!(w > 0.0)) return 0.0;
        return gamma_density(w, s, r) * dist::normal_tail(a / (xi_ * std::sqrt(w)));
      },
      0.0, std::numeric_limits<double>::infinity());
}

Vec mixture_conjugate_above(const NormalMixtureFamily& f, const Vec& t, double a) {
  if (!f.in_domain(t)) throw DomainError("mixture conjugate: parameters outside the domain");
  const Vec tz = NormalMixtureFamily::z_part(t);
  const Vec tw = NormalMixtureFamily::w_part(t);
  const double k = 1.0 + 2.0 * tz[1];
  const double m = -tz[0] / k;
  const double sd = 1.0 / std::sqrt(k);
  const double shape = f.w_family().alpha() - tw[0];
  const double rate = f.w_family().beta() + tw[1];

  auto log_dens = [&](double w) {
    const double c = a / (f.xi() * std::sqrt(w));
    // Unnormalised: the conjugate shape may be non-positive.
    return (shape - 1.0) * std::log(w) - rate * w + log_normal_tail((c - m) / sd);
  };
  // Scale by the integrand's peak on a log grid; unscaled it underflows for
  // tilts that push the event far into the tails.
  double peak = -std::numeric_limits<double>::infinity();
  double peak_w = 1.0;
  auto probe = [&](double w) {
    const double v = log_dens(w);
    if (std::isfinite(v) && v > peak) {
      peak = v;
      peak_w = w;
    }
  };
  for (int i = 0; i <= 800; ++i) probe(std::exp(-25.0 + 0.05 * i));
  // A concentrated W law can fall between grid points.
  if (shape > 0.0) probe(shape / rate);
  if (shape > 1.0) probe((shape - 1.0) / rate);
  if (!std::isfinite(peak)) throw NumericalError("mixture conjugate: event has zero mass");

  // Integrand index: 0 mass, 1 z, 2 ln w, 3 z^2, 4 w.
  std::array<double, 5> acc{};
  // Split at the peak so both rules place nodes densely around it.
  boost::math::quadrature::tanh_sinh<double> inner;
  boost::math::quadrature::exp_sinh<double> outer;
  for (int j = 0; j < 5; ++j) {
    auto term = [&](double w) {
      if (!(w > 0.0) || !std::isfinite(w)) return 0.0;
      const double dens = std::exp(log_dens(w) - peak);
      if (!(dens > 0.0)) return 0.0;
      switch (j) {
        case 0:
          return dens;
        case 2:
          return dens * std::log(w);
        case 4:
          return dens * w;
        default:
          break;
      }
      const double c = a / (f.xi() * std::sqrt(w));
      const auto tm = truncated_normal_above(m, sd, c);
      return dens * (j == 1 ? tm.mean : tm.second);
    };
    auto safe = [&](double w) {
      const double v = term(w);
      return std::isfinite(v) ? v : 0.0;
    };
    acc[j] = inner.integrate(safe, 0.0, peak_w) +
             outer.integrate(safe, peak_w, std::numeric_limits<double>::infinity());
  }
  if (!(acc[0] > 0.0)) throw NumericalError("mixture conjugate: event has zero mass");
  Vec out(4);
  out << acc[1] / acc[0], acc[2] / acc[0], acc[3] / acc[0], acc[4] / acc[0];
  return out;
}

}  // namespace creditis::fam
