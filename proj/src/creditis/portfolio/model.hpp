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
#include <cstdint>
#include <string>
#include <vector>

#include "creditis/distributions/random_stream.hpp"
#include "creditis/distributions/samplers.hpp"

namespace creditis::port {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Direction { kAbove, kBelow };

/// Obligor k has latent X_k = sum_i rho_ki sqrt(W_i) Z_i + rho_k sqrt(W_{d+1}) eps_k
/// with eps_k ~ N(0, idio_std^2), and defaults when X_k crosses its threshold
/// in `direction`.
struct PortfolioModel {
  Mat loadings;  // n x d
  Vec idio_loading;
  Vec thresholds;
  std::vector<std::int64_t> exposures;
  double idio_std = 1.0;
  Mat factor_cov;  // d x d
  Direction direction = Direction::kAbove;

  /// Builds a model and derives rho_k = sqrt(1 - sum_i rho_ki^2).
  static PortfolioModel make(Mat loadings, Vec thresholds, std::vector<std::int64_t> exposures,
                             double idio_std, Mat factor_cov, Direction direction);

  int n() const { return static_cast<int>(loadings.rows()); }
  int d() const { return static_cast<int>(loadings.cols()); }
  std::int64_t total_exposure() const;
  /// Throws InvalidArgument or DomainError on any violated invariant.
  void validate() const;
};

enum class ShockKind { kTCopula, kGammaDirect, kDegenerate };
enum class Sharing { kShared, kIndependent };

/// Law of the mixing variables W. For kTCopula, W_j = nu_j / Q_j with
/// Q_j ~ Gamma(nu_j/2, 1/2); for kGammaDirect, W_j ~ Gamma(alpha_j, beta_j).
/// Shared laws use a single gamma variable for all d+1 components.
struct ShockSpec {
  ShockKind kind = ShockKind::kDegenerate;
  Sharing sharing = Sharing::kIndependent;
  std::vector<double> nu;     // t-copula degrees of freedom
  std::vector<double> alpha;  // gamma-direct shapes
  std::vector<double> beta;   // gamma-direct rates

  static ShockSpec t_copula(std::vector<double> nu, Sharing sharing);
  static ShockSpec gamma_direct(std::vector<double> alpha, std::vector<double> beta,
                                Sharing sharing = Sharing::kIndependent);
  static ShockSpec degenerate();

  /// Number of gamma-distributed variables driving W.
  int gamma_count(int d) const;
  double gamma_shape(int j) const;
  double gamma_rate(int j) const;
  void validate(int d) const;
};

struct FactorSample {
  Vec z;
  Vec w;  // length d + 1
  Vec q;  // gamma-space values, length gamma_count
};

/// Tilt of the factor laws: Z ~ N(mu, Sigma), Q_j ~ Gamma(a_j - theta_j, b_j + eta_j).
struct FactorTilt {
  Vec mu;
  Vec theta;
  Vec eta;

  static FactorTilt zero(int d, int gamma_count);
};

bool tilt_in_domain(const ShockSpec& shock, const FactorTilt& tilt, double margin = 0.0);

/// Maps gamma-space values to W.
Vec shock_from_gamma(const ShockSpec& shock, const Vec& q, int d);

/// Draws Z first, then the gamma variables, from `stream`. Without a tilt
/// the base law P is used.
FactorSample sample_factors(const PortfolioModel& model, const ShockSpec& shock,
                            dist::RandomStream& stream, const FactorTilt* tilt = nullptr);

/// Conditional default probabilities given (z, w).
Vec conditional_default_probs(const PortfolioModel& model, const FactorSample& sample);

/// Precomputed laws for repeated likelihood-ratio evaluation.
class TiltedLaw {
 public:
  TiltedLaw(const PortfolioModel& model, const ShockSpec& shock, const FactorTilt& tilt);

  const FactorTilt& tilt() const { return tilt_; }
  FactorSample sample(dist::RandomStream& stream) const;
  /// ln r1(z) + ln r2(q) = ln dP/dQ at the sample; exactly 0 at zero tilt.
  double log_likelihood_ratio(const FactorSample& sample) const;

 private:
  ShockSpec shock_;
  int d_;
  FactorTilt tilt_;
  dist::MvnParams base_z_;
  dist::MvnParams tilted_z_;
  std::vector<dist::GammaParams> base_q_;
  std::vector<dist::GammaParams> tilted_q_;
};

enum class ExposureKind { kEqual, kTwoLevel, kFiveLevel };
ExposureKind parse_exposure_kind(const std::string& name);
std::string exposure_kind_name(ExposureKind kind);

/// equal: 1; two_level: ceil(2i/n)^2; five_level: ceil(5i/n)^2, i = 1..n.
std::vector<std::int64_t> exposure_profile(ExposureKind kind, int n);

/// Loss L = sum_k c_k 1{default_k} from explicit idiosyncratic draws.
std::int64_t simulate_loss(const PortfolioModel& model, const FactorSample& sample,
                           dist::RandomStream& stream);

}  // namespace creditis::port
