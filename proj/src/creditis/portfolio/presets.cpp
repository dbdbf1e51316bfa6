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

#include "creditis/portfolio/presets.hpp"

#include <cmath>
#include <sstream>

#include "creditis/common/error.hpp"
#include "creditis/distributions/special_functions.hpp"

namespace creditis::port {

TiltMask TiltMask::parse(const std::string& text) {
  TiltMask m{false, false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    item = b == std::string::npos ? "" : item.substr(b, e - b + 1);
    if (item == "mu") {
      m.mu = true;
    } else if (item == "sigma") {
      m.sigma = true;
    } else if (item == "theta") {
      m.theta = true;
    } else if (item == "eta") {
      m.eta = true;
    } else if (item == "none" || item.empty()) {
    } else {
      throw InvalidArgument("unknown tilt block '" + item + "' (mu, sigma, theta, eta, none)");
    }
  }
  return m;
}

std::string TiltMask::to_string() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(mu, "mu");
  add(sigma, "sigma");
  add(theta, "theta");
  add(eta, "eta");
  return out.empty() ? "none" : out;
}

Mat equicorrelated_cov(const std::vector<double>& sigma, double rho) {
  const auto d = static_cast<Eigen::Index>(sigma.size());
  Mat cov(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      cov(i, j) = (i == j ? 1.0 : rho) * sigma[i] * sigma[j];
    }
  }
  return cov;
}

PortfolioModel homogeneous_model(int n, int d, double loading, double threshold,
                                 const std::vector<std::int64_t>& exposures, double idio_std,
                                 const Mat& factor_cov, Direction direction) {
  return PortfolioModel::make(Mat::Constant(n, d, loading), Vec::Constant(n, threshold),
                              exposures, idio_std, factor_cov, direction);
}

PortfolioModel sector_model(int n, int sectors, double global_loading, double sector_loading,
                            double threshold, const std::vector<std::int64_t>& exposures,
                            double idio_std, Direction direction) {
  Mat loadings = Mat::Zero(n, sectors + 1);
  for (int k = 0; k < n; ++k) {
    loadings(k, 0) = global_loading;
    loadings(k, 1 + k % sectors) = sector_loading;
  }
  return PortfolioModel::make(std::move(loadings), Vec::Constant(n, threshold), exposures,
                              idio_std, Mat::Identity(sectors + 1, sectors + 1), direction);
}

std::int64_t tau_from_b(int n, double b) {
  return static_cast<std::int64_t>(std::floor(n * b + 1e-9));
}

std::vector<std::string> preset_names() {
  return {"one_factor_t", "three_factor_base", "three_factor_gig", "cdx_ig_8factor", "fft_check"};
}

int ModelBlueprint::factors() const { return structure == "sector" ? sectors + 1 : d; }

PortfolioModel ModelBlueprint::build() const {
  if (n < 1) throw InvalidArgument("model needs at least one obligor");
  const double chi = threshold ? *threshold : threshold_scale * std::sqrt(static_cast<double>(n));
  const auto exp = exposure_profile(exposures, n);
  if (structure == "homogeneous") {
    if (d < 1) throw InvalidArgument("model needs at least one factor");
    if (static_cast<int>(factor_sigma.size()) != d) {
      throw InvalidArgument("factor_sigma needs " + std::to_string(d) + " entries");
    }
    return homogeneous_model(n, d, loading, chi, exp, sigma_eps,
                             equicorrelated_cov(factor_sigma, factor_rho), direction);
  }
  if (structure == "sector") {
    if (sectors < 1) throw InvalidArgument("sector model needs at least one sector");
    return sector_model(n, sectors, global_loading, sector_loading, chi, exp, sigma_eps, direction);
  }
  throw InvalidArgument("unknown model structure '" + structure + "' (homogeneous, sector)");
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  ModelBlueprint& bp = p.blueprint;
  if (name == "one_factor_t") {
    bp.d = 1;
    bp.loading = 0.25;
    bp.sigma_eps = 3.0;
    p.shock = ShockSpec::t_copula({4.0}, Sharing::kShared);
    p.b = 0.25;
    p.b_grid = {0.25};
    p.nu_grid = {4.0, 8.0, 12.0, 16.0, 20.0};
    p.mask = TiltMask{true, false, false, true};
  } else if (name == "three_factor_base" || name == "three_factor_gig") {
    bp.d = 3;
    bp.loading = 0.1;
    bp.sigma_eps = 3.0;
    bp.factor_sigma = {1.0, 0.8, 0.5};
    bp.factor_rho = 0.5;
    const std::vector<double> nu{8.0, 6.0, 4.0, 4.0};
    if (name == "three_factor_base") {
      p.shock = ShockSpec::t_copula(nu, Sharing::kIndependent);
      p.b = 0.3;
      p.b_grid = {0.3, 0.4, 0.5};
      p.mask = TiltMask{true, false, false, true};
    } else {
      std::vector<double> alpha;
      for (double v : nu) alpha.push_back(0.5 * v);
      p.shock = ShockSpec::gamma_direct(alpha, std::vector<double>(4, 0.5));
      p.b = 0.32;
      p.b_grid = {0.28, 0.32, 0.36};
      p.mask = TiltMask{true, false, true, false};
    }
  } else if (name == "cdx_ig_8factor") {
    bp.structure = "sector";
    bp.n = 125;
    bp.sectors = 7;
    bp.global_loading = std::sqrt(0.17);
    bp.sector_loading = std::sqrt(0.23 - 0.17);
    bp.threshold_scale = -0.55;
    bp.sigma_eps = 1.0;
    bp.direction = Direction::kBelow;
    p.shock = ShockSpec::t_copula({4.0}, Sharing::kShared);
    p.b = 0.2;
    p.b_grid = {0.01, 0.05, 0.2};
    p.mask = TiltMask{true, false, false, true};
  } else if (name == "fft_check") {
    // Independent obligors with default probability 0.1 each.
    bp.d = 1;
    bp.loading = 0.0;
    bp.threshold = dist::normal_quantile(0.9);
    p.shock = ShockSpec::degenerate();
    p.b = 0.08;
    p.b_grid = {0.08, 0.04, 0.02};
    p.mask = TiltMask{false, false, false, false};
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
  p.model = bp.build();
  return p;
}

}  // namespace creditis::port
