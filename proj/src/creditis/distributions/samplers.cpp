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

#include "creditis/distributions/samplers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "creditis/common/error.hpp"
#include "creditis/distributions/special_functions.hpp"

namespace creditis::dist {

MvnParams::MvnParams(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  const auto d = mean_.size();
  if (d == 0 || covariance_.rows() != d || covariance_.cols() != d) {
    throw DomainError("MvnParams: mean and covariance dimensions disagree");
  }
  if (!covariance_.allFinite() ||
      (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() >
          1e-12 * (1.0 + covariance_.cwiseAbs().maxCoeff())) {
    throw DomainError("MvnParams: covariance must be finite and symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw DomainError("MvnParams: covariance is not positive definite");
  }
  chol_ = llt.matrixL();
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

MvnParams MvnParams::standard(int dim) {
  return MvnParams(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

MvnParams MvnParams::with_mean(Eigen::VectorXd mean) const {
  if (mean.size() != mean_.size()) {
    throw DomainError("MvnParams::with_mean: dimension mismatch");
  }
  MvnParams out;
  out.mean_ = std::move(mean);
  out.covariance_ = covariance_;
  out.chol_ = chol_;
  out.log_det_ = log_det_;
  return out;
}

GammaParams::GammaParams(double shape, double rate) : shape_(shape), rate_(rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw DomainError("GammaParams: shape and rate must be positive, got shape=" +
                      std::to_string(shape) + " rate=" + std::to_string(rate));
  }
}

double sample_std_normal(RandomStream& stream) { return stream.std_normal(); }

Eigen::VectorXd sample_mvn(const MvnParams& params, RandomStream& stream) {
  Eigen::VectorXd eps(params.dim());
  for (int i = 0; i < params.dim(); ++i) eps[i] = stream.std_normal();
  return params.mean() + params.chol_factor().triangularView<Eigen::Lower>() * eps;
}

namespace {

double marsaglia_tsang(double shape, RandomStream& stream) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.std_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(const GammaParams& params, RandomStream& stream) {
  const double shape = params.shape();
  if (shape >= 1.0) return marsaglia_tsang(shape, stream) / params.rate();
  const double g = marsaglia_tsang(shape + 1.0, stream);
  const double u = stream.uniform();
  // exp(log(u)/shape) underflows gracefully for tiny shapes.
  double x = g * std::exp(std::log(u) / shape);
  if (x <= 0.0) x = std::numeric_limits<double>::min();
  return x / params.rate();
}

double log_pdf_normal(double x, double mean, double std) {
  if (!(std > 0.0)) throw DomainError("log_pdf_normal: std must be positive");
  const double z = (x - mean) / std;
  return -0.5 * z * z - std::log(std) - kLogSqrt2Pi;
}

double log_pdf_mvn(const Eigen::VectorXd& x, const MvnParams& params) {
  if (x.size() != params.dim()) throw DomainError("log_pdf_mvn: dimension mismatch");
  const Eigen::VectorXd diff = x - params.mean();
  const Eigen::VectorXd y =
      params.chol_factor().triangularView<Eigen::Lower>().solve(diff);
  return -0.5 * y.squaredNorm() - 0.5 * params.log_det() - params.dim() * kLogSqrt2Pi;
}

double log_pdf_gamma(double x, const GammaParams& params) {
  if (!(x > 0.0)) throw DomainError("log_pdf_gamma: x must be positive");
  const double a = params.shape();
  const double b = params.rate();
  return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
}

}  // namespace creditis::dist
