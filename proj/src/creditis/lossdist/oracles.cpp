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

#include "creditis/lossdist/oracles.hpp"

#include <cmath>

#include "creditis/common/error.hpp"

namespace creditis::loss {

std::vector<double> binomial_pmf_oracle(int n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw InvalidArgument("binomial oracle: bad parameters");
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  if (p == 0.0 || p == 1.0) {
    pmf[p == 0.0 ? 0 : n] = 1.0;
    return pmf;
  }
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(-static_cast<long double>(p));
  const long double ln_fact_n = std::lgamma(static_cast<long double>(n) + 1.0L);
  for (int k = 0; k <= n; ++k) {
    const long double lc = ln_fact_n - std::lgamma(static_cast<long double>(k) + 1.0L) -
                           std::lgamma(static_cast<long double>(n - k) + 1.0L);
    pmf[k] = static_cast<double>(std::exp(lc + k * lp + (n - k) * lq));
  }
  return pmf;
}

double binomial_cdf_oracle(int n, double p, std::int64_t tau) {
  if (tau < 0) return 0.0;
  const auto pmf = binomial_pmf_oracle(n, p);
  long double sum = 0.0L;
  for (std::int64_t k = 0; k <= tau && k <= n; ++k) sum += pmf[static_cast<std::size_t>(k)];
  return static_cast<double>(sum);
}

double binomial_tail_oracle(int n, double p, std::int64_t tau) {
  const auto pmf = binomial_pmf_oracle(n, p);
  long double sum = 0.0L;
  for (std::int64_t k = std::max<std::int64_t>(tau + 1, 0); k <= n; ++k) {
    sum += pmf[static_cast<std::size_t>(k)];
  }
  return static_cast<double>(sum);
}

ConditionalLossDist convolution_oracle(const Eigen::VectorXd& p,
                                       const std::vector<std::int64_t>& exposures) {
  if (static_cast<std::size_t>(p.size()) != exposures.size()) {
    throw InvalidArgument("convolution oracle: length mismatch");
  }
  std::int64_t total = 0;
  for (auto c : exposures) {
    if (c < 0) throw InvalidArgument("convolution oracle: negative exposure");
    total += c;
  }
  std::vector<long double> q(static_cast<std::size_t>(total) + 1, 0.0L);
  q[0] = 1.0L;
  std::int64_t reach = 0;
  for (std::size_t k = 0; k < exposures.size(); ++k) {
    const long double pk = p[static_cast<Eigen::Index>(k)];
    const std::int64_t c = exposures[k];
    reach += c;
    for (std::int64_t l = reach; l >= 0; --l) {
      const long double stay = q[static_cast<std::size_t>(l)] * (1.0L - pk);
      const long double jump = l >= c ? q[static_cast<std::size_t>(l - c)] * pk : 0.0L;
      q[static_cast<std::size_t>(l)] = c == 0 ? q[static_cast<std::size_t>(l)] : stay + jump;
    }
  }
  ConditionalLossDist out;
  out.source = PmfSource::kConvolution;
  out.pmf.assign(q.begin(), q.end());
  return out;
}

}  // namespace creditis::loss
