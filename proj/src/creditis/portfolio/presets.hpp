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

#include <optional>
#include <string>
#include <vector>

#include "creditis/portfolio/model.hpp"

namespace creditis::port {

/// Which blocks of the factor tilt are searched.
struct TiltMask {
  bool mu = true;
  bool sigma = false;
  bool theta = false;
  bool eta = false;

  static TiltMask parse(const std::string& text);  // e.g. "mu,theta"
  std::string to_string() const;
  bool operator==(const TiltMask&) const = default;
};

/// Construction parameters of the factor structures used by the presets.
/// "homogeneous": every obligor loads `loading` on each of d factors with
/// covariance from factor_sigma and factor_rho. "sector": a global factor plus
/// `sectors` sector factors, obligor k in sector k mod sectors, identity
/// covariance.
struct ModelBlueprint {
  std::string structure = "homogeneous";
  int n = 250;
  int d = 1;
  double loading = 0.0;
  int sectors = 7;
  double global_loading = 0.0;
  double sector_loading = 0.0;
  /// Threshold chi = threshold_scale * sqrt(n) unless `threshold` is set.
  double threshold_scale = 0.5;
  std::optional<double> threshold;
  ExposureKind exposures = ExposureKind::kEqual;
  double sigma_eps = 1.0;
  std::vector<double> factor_sigma{1.0};
  double factor_rho = 0.0;
  Direction direction = Direction::kAbove;

  /// Factor count of the built model.
  int factors() const;
  /// Throws InvalidArgument on a malformed blueprint.
  PortfolioModel build() const;
  bool operator==(const ModelBlueprint&) const = default;
};

struct Preset {
  std::string name;
  ModelBlueprint blueprint;
  PortfolioModel model;
  ShockSpec shock;
  double b = 0.0;                // default loss fraction, tau = floor(n b)
  std::vector<double> b_grid;    // experiment grid
  std::vector<double> nu_grid;   // one-factor t grid
  TiltMask mask;
};

std::vector<std::string> preset_names();
Preset preset(const std::string& name);

/// Model constructors used by presets and configuration overrides.
PortfolioModel homogeneous_model(int n, int d, double loading, double threshold,
                                 const std::vector<std::int64_t>& exposures, double idio_std,
                                 const Mat& factor_cov, Direction direction);
Mat equicorrelated_cov(const std::vector<double>& sigma, double rho);
PortfolioModel sector_model(int n, int sectors, double global_loading, double sector_loading,
                            double threshold, const std::vector<std::int64_t>& exposures,
                            double idio_std, Direction direction);

/// Loss threshold for L > tau given a loss fraction b of the obligor count.
std::int64_t tau_from_b(int n, double b);

}  // namespace creditis::port
