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
#include <vector>

#include "creditis/lossdist/lossdist.hpp"

namespace creditis::loss {

/// Binomial(n, p) pmf on {0..n}, summed in extended precision.
std::vector<double> binomial_pmf_oracle(int n, double p);
/// P(L <= tau) for L ~ Binomial(n, p).
double binomial_cdf_oracle(int n, double p, std::int64_t tau);
/// P(L > tau) for L ~ Binomial(n, p).
double binomial_tail_oracle(int n, double p, std::int64_t tau);

/// Exact pmf on {0..C} by O(n C) dynamic programming.
ConditionalLossDist convolution_oracle(const Eigen::VectorXd& p,
                                       const std::vector<std::int64_t>& exposures);

}  // namespace creditis::loss
