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

#include "creditis/distributions/random_stream.hpp"

namespace creditis::dist {

/// Multivariate normal law with a cached lower Cholesky factor.
class MvnParams {
 public:
  /// Throws DomainError unless `covariance` is symmetric positive definite
  /// and dimensions agree.
  MvnParams(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  static MvnParams standard(int dim);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  double log_det() const { return log_det_; }

  /// Same covariance, different mean; reuses the factorisation.
  MvnParams with_mean(Eigen::VectorXd mean) const;

 private:
  MvnParams() = default;

  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
};

/// Gamma(shape, rate): density proportional to x^(shape-1) exp(-rate x).
class GammaParams {
 public:
  GammaParams(double shape, double rate);
  double shape() const { return shape_; }
  double rate() const { return rate_; }
  double mean() const { return shape_ / rate_; }

 private:
  double shape_;
  double rate_;
};

double sample_std_normal(RandomStream& stream);
Eigen::VectorXd sample_mvn(const MvnParams& params, RandomStream& stream);
/// Marsaglia-Tsang squeeze with the U^(1/shape) boost for shape < 1.
double sample_gamma(const GammaParams& params, RandomStream& stream);

double log_pdf_normal(double x, double mean, double std);
double log_pdf_mvn(const Eigen::VectorXd& x, const MvnParams& params);
double log_pdf_gamma(double x, const GammaParams& params);

}  // namespace creditis::dist
