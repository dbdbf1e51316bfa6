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

#include "creditis/portfolio/model.hpp"

#include <cmath>
#include <limits>

#include "creditis/common/error.hpp"
#include "creditis/distributions/special_functions.hpp"

namespace creditis::port {

PortfolioModel PortfolioModel::make(Mat loadings, Vec thresholds,
                                    std::vector<std::int64_t> exposures, double idio_std,
                                    Mat factor_cov, Direction direction) {
  PortfolioModel m;
  m.idio_loading.resize(loadings.rows());
  for (Eigen::Index k = 0; k < loadings.rows(); ++k) {
    const double systematic = loadings.row(k).squaredNorm();
    if (systematic > 1.0 + 1e-12) {
      throw DomainError("obligor " + std::to_string(k) + ": squared loadings exceed one");
    }
    m.idio_loading[k] = std::sqrt(std::max(0.0, 1.0 - systematic));
  }
  m.loadings = std::move(loadings);
  m.thresholds = std::move(thresholds);
  m.exposures = std::move(exposures);
  m.idio_std = idio_std;
  m.factor_cov = std::move(factor_cov);
  m.direction = direction;
  m.validate();
  return m;
}

std::int64_t PortfolioModel::total_exposure() const {
  std::int64_t total = 0;
  for (auto c : exposures) total += c;
  return total;
}

void PortfolioModel::validate() const {
  const auto count = loadings.rows();
  if (count < 1 || loadings.cols() < 1) throw InvalidArgument("model needs n >= 1 and d >= 1");
  if (idio_loading.size() != count || thresholds.size() != count ||
      static_cast<Eigen::Index>(exposures.size()) != count) {
    throw InvalidArgument("model vectors must all have length n");
  }
  if (factor_cov.rows() != loadings.cols() || factor_cov.cols() != loadings.cols()) {
    throw InvalidArgument("factor covariance must be d x d");
  }
  if (!(idio_std > 0.0) || !std::isfinite(idio_std)) {
    throw DomainError("idiosyncratic standard deviation must be positive");
  }
  if (!loadings.allFinite() || !thresholds.allFinite()) {
    throw DomainError("loadings and thresholds must be finite");
  }
  for (Eigen::Index k = 0; k < count; ++k) {
    const double total = loadings.row(k).squaredNorm() + idio_loading[k] * idio_loading[k];
    if (std::fabs(total - 1.0) > 1e-12 || idio_loading[k] < 0.0) {
      throw DomainError("obligor " + std::to_string(k) + ": loadings do not have unit norm");
    }
    if (exposures[k] < 0) throw DomainError("exposures must be non-negative");
  }
  if ((factor_cov - factor_cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("factor covariance must be symmetric");
  }
  if (Eigen::LLT<Mat>(factor_cov).info() != Eigen::Success) {
    throw DomainError("factor covariance must be positive definite");
  }
}

ShockSpec ShockSpec::t_copula(std::vector<double> nu, Sharing sharing) {
  ShockSpec s;
  s.kind = ShockKind::kTCopula;
  s.sharing = sharing;
  s.nu = std::move(nu);
  return s;
}

ShockSpec ShockSpec::gamma_direct(std::vector<double> alpha, std::vector<double> beta,
                                  Sharing sharing) {
  ShockSpec s;
  s.kind = ShockKind::kGammaDirect;
  s.sharing = sharing;
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  return s;
}

ShockSpec ShockSpec::degenerate() { return ShockSpec{}; }

int ShockSpec::gamma_count(int d) const {
  if (kind == ShockKind::kDegenerate) return 0;
  return sharing == Sharing::kShared ? 1 : d + 1;
}

double ShockSpec::gamma_shape(int j) const {
  switch (kind) {
    case ShockKind::kTCopula:
      return 0.5 * nu.at(j);
    case ShockKind::kGammaDirect:
      return alpha.at(j);
    case ShockKind::kDegenerate:
      break;
  }
  throw InvalidArgument("degenerate shock has no gamma variables");
}

double ShockSpec::gamma_rate(int j) const {
  switch (kind) {
    case ShockKind::kTCopula:
      return 0.5;
    case ShockKind::kGammaDirect:
      return beta.at(j);
    case ShockKind::kDegenerate:
      break;
  }
  throw InvalidArgument("degenerate shock has no gamma variables");
}

void ShockSpec::validate(int d) const {
  const auto want = static_cast<std::size_t>(gamma_count(d));
  auto positive = [](const std::vector<double>& v) {
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) return false;
    }
    return true;
  };
  switch (kind) {
    case ShockKind::kDegenerate:
      return;
    case ShockKind::kTCopula:
      if (nu.size() != want) {
        throw InvalidArgument("t-copula needs " + std::to_string(want) + " degrees of freedom");
      }
      if (!positive(nu)) throw DomainError("degrees of freedom must be positive");
      return;
    case ShockKind::kGammaDirect:
      if (alpha.size() != want || beta.size() != want) {
        throw InvalidArgument("gamma shock needs " + std::to_string(want) + " shapes and rates");
      }
      if (!positive(alpha) || !positive(beta)) {
        throw DomainError("gamma shapes and rates must be positive");
      }
      return;
  }
}

FactorTilt FactorTilt::zero(int d, int gamma_count) {
  return {Vec::Zero(d), Vec::Zero(gamma_count), Vec::Zero(gamma_count)};
}

bool tilt_in_domain(const ShockSpec& shock, const FactorTilt& tilt, double margin) {
  if (!tilt.mu.allFinite() || !tilt.theta.allFinite() || !tilt.eta.allFinite()) return false;
  for (Eigen::Index j = 0; j < tilt.theta.size(); ++j) {
    const int jj = static_cast<int>(j);
    if (!(shock.gamma_shape(jj) - tilt.theta[j] > margin)) return false;
    if (!(shock.gamma_rate(jj) + tilt.eta[j] > margin)) return false;
  }
  return true;
}

Vec shock_from_gamma(const ShockSpec& shock, const Vec& q, int d) {
  Vec w = Vec::Ones(d + 1);
  if (shock.kind == ShockKind::kDegenerate) return w;
  for (int j = 0; j <= d; ++j) {
    const int src = shock.sharing == Sharing::kShared ? 0 : j;
    w[j] = shock.kind == ShockKind::kTCopula ? shock.nu[src] / q[src] : q[src];
  }
  return w;
}

TiltedLaw::TiltedLaw(const PortfolioModel& model, const ShockSpec& shock, const FactorTilt& tilt)
    : shock_(shock),
      d_(model.d()),
      tilt_(tilt),
      base_z_(Vec::Zero(model.d()), model.factor_cov),
      tilted_z_(base_z_.with_mean(tilt.mu)) {
  const int m = shock.gamma_count(d_);
  if (tilt.mu.size() != d_ || tilt.theta.size() != m || tilt.eta.size() != m) {
    throw InvalidArgument("tilt dimensions do not match the model");
  }
  if (!tilt_in_domain(shock, tilt)) {
    throw DomainError("tilt outside the domain: need shape - theta > 0 and rate + eta > 0");
  }
  for (int j = 0; j < m; ++j) {
    const double a = shock.gamma_shape(j);
    const double b = shock.gamma_rate(j);
    base_q_.emplace_back(a, b);
    tilted_q_.emplace_back(a - tilt.theta[j], b + tilt.eta[j]);
  }
}

FactorSample TiltedLaw::sample(dist::RandomStream& stream) const {
  FactorSample s;
  s.z = dist::sample_mvn(tilted_z_, stream);
  s.q.resize(static_cast<Eigen::Index>(tilted_q_.size()));
  for (std::size_t j = 0; j < tilted_q_.size(); ++j) {
    s.q[static_cast<Eigen::Index>(j)] = dist::sample_gamma(tilted_q_[j], stream);
  }
  s.w = shock_from_gamma(shock_, s.q, d_);
  return s;
}

double TiltedLaw::log_likelihood_ratio(const FactorSample& sample) const {
  double lr = dist::log_pdf_mvn(sample.z, base_z_) - dist::log_pdf_mvn(sample.z, tilted_z_);
  for (std::size_t j = 0; j < base_q_.size(); ++j) {
    const double q = sample.q[static_cast<Eigen::Index>(j)];
    lr += dist::log_pdf_gamma(q, base_q_[j]) - dist::log_pdf_gamma(q, tilted_q_[j]);
  }
  return lr;
}

FactorSample sample_factors(const PortfolioModel& model, const ShockSpec& shock,
                            dist::RandomStream& stream, const FactorTilt* tilt) {
  const FactorTilt t = tilt ? *tilt : FactorTilt::zero(model.d(), shock.gamma_count(model.d()));
  return TiltedLaw(model, shock, t).sample(stream);
}

Vec conditional_default_probs(const PortfolioModel& model, const FactorSample& sample) {
  const int d = model.d();
  if (sample.z.size() != d || sample.w.size() != d + 1) {
    throw InvalidArgument("factor sample dimensions do not match the model");
  }
  if (!sample.z.allFinite() || !sample.w.allFinite()) {
    throw InvalidArgument("factor sample contains non-finite values");
  }
  Vec scaled(d);
  for (int i = 0; i < d; ++i) scaled[i] = std::sqrt(sample.w[i]) * sample.z[i];
  const Vec systematic = model.loadings * scaled;
  const double idio_scale = std::sqrt(sample.w[d]) * model.idio_std;
  const bool above = model.direction == Direction::kAbove;
  Vec p(model.n());
  for (int k = 0; k < model.n(); ++k) {
    const double num = model.thresholds[k] - systematic[k];
    const double den = model.idio_loading[k] * idio_scale;
    if (den > 0.0) {
      const double x = num / den;
      p[k] = above ? dist::normal_tail(x) : dist::normal_cdf(x);
    } else {
      // Purely systematic obligor: default is decided by the sign of num.
      p[k] = above ? (num < 0.0 ? 1.0 : 0.0) : (num > 0.0 ? 1.0 : 0.0);
    }
  }
  return p;
}

ExposureKind parse_exposure_kind(const std::string& name) {
  if (name == "equal") return ExposureKind::kEqual;
  if (name == "two_level") return ExposureKind::kTwoLevel;
  if (name == "five_level") return ExposureKind::kFiveLevel;
  throw InvalidArgument("unknown exposure profile '" + name + "'");
}

std::string exposure_kind_name(ExposureKind kind) {
  switch (kind) {
    case ExposureKind::kEqual:
      return "equal";
    case ExposureKind::kTwoLevel:
      return "two_level";
    case ExposureKind::kFiveLevel:
      return "five_level";
  }
  return "equal";
}

std::vector<std::int64_t> exposure_profile(ExposureKind kind, int n) {
  if (n < 1) throw InvalidArgument("exposure_profile: n must be positive");
  const std::int64_t levels = kind == ExposureKind::kEqual ? 1 : kind == ExposureKind::kTwoLevel ? 2 : 5;
  std::vector<std::int64_t> c(n);
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t level = (levels * i + n - 1) / n;
    c[i - 1] = level * level;
  }
  return c;
}

std::int64_t simulate_loss(const PortfolioModel& model, const FactorSample& sample,
                           dist::RandomStream& stream) {
  const int d = model.d();
  Vec scaled(d);
  for (int i = 0; i < d; ++i) scaled[i] = std::sqrt(sample.w[i]) * sample.z[i];
  const Vec systematic = model.loadings * scaled;
  const double idio_scale = std::sqrt(sample.w[d]) * model.idio_std;
  const bool above = model.direction == Direction::kAbove;
  std::int64_t loss = 0;
  for (int k = 0; k < model.n(); ++k) {
    const double x = systematic[k] + model.idio_loading[k] * idio_scale * stream.std_normal();
    if (above ? x > model.thresholds[k] : x < model.thresholds[k]) loss += model.exposures[k];
  }
  return loss;
}

}  // namespace creditis::port
