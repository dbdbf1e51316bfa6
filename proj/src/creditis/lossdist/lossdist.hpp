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
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "creditis/lossdist/fft.hpp"

namespace creditis::loss {

/// Integer loss support {0..C} embedded in an FFT grid of size N, the
/// smallest power of two strictly greater than C.
class LossLattice {
 public:
  explicit LossLattice(std::vector<std::int64_t> exposures);

  const std::vector<std::int64_t>& exposures() const { return exposures_; }
  std::int64_t total() const { return total_; }
  std::size_t fft_size() const { return fft_size_; }

 private:
  std::vector<std::int64_t> exposures_;
  std::int64_t total_ = 0;
  std::size_t fft_size_ = 1;
};

/// Obligors sharing an exposure and a default probability.
struct ObligorGroup {
  std::int64_t exposure;
  double prob;
  std::int64_t count;
};

/// Groups obligors by exact (c, p); throws InvalidArgument on p outside [0, 1].
void group_obligors(const Eigen::VectorXd& p, const std::vector<std::int64_t>& exposures,
                    std::vector<ObligorGroup>& groups);

enum class PmfSource { kFft, kConvolution, kBinomial };

struct ConditionalLossDist {
  std::vector<double> pmf;
  PmfSource source = PmfSource::kFft;
};

/// b_m = prod_l (1 - p_l + p_l e^{i t c_l}) at t = 2 pi m / N. Obligors with
/// identical (c, p) are grouped and the product is accumulated as a
/// log-magnitude and a phase.
std::vector<Complex> char_function_samples(const Eigen::VectorXd& p, const LossLattice& lattice);

/// Direct product at a single frequency t.
Complex char_function_at(const Eigen::VectorXd& p, const std::vector<std::int64_t>& exposures,
                         double t);

/// q_k = (1/N) sum_m b_m e^{-2 pi i k m / N}. Throws NumericalError if an
/// imaginary part exceeds 1e-8 or the mass is not one within 1e-10. All N
/// entries are kept.
ConditionalLossDist invert_to_pmf(std::vector<Complex> b);
/// pmf on the loss lattice {0, ..., C}: inversion of char_function_samples
/// with the aliasing tail above C dropped.
ConditionalLossDist loss_pmf(const Eigen::VectorXd& p, const LossLattice& lattice);

/// P(L > tau) for 0 <= tau <= C, summed over the upper tail and clamped to
/// [0, 1].
double tail_prob(const ConditionalLossDist& dist, std::int64_t tau);
/// P(L <= tau).
double cdf(const ConditionalLossDist& dist, std::int64_t tau);

/// Repeated evaluation of P(L > tau | p) with reusable buffers. Not
/// thread-safe; use one per worker.
class TailEvaluator {
 public:
  TailEvaluator(const LossLattice& lattice, std::int64_t tau);

  const LossLattice& lattice() const { return lattice_; }
  std::int64_t tau() const { return tau_; }

  /// P(L > tau | p), equal to exp(log_tail(p)).
  double operator()(const Eigen::VectorXd& p);
  /// ln P(L > tau | p); -inf when the event is impossible. When the mean
  /// loss is below tau the pmf is recovered on an exponentially shifted
  /// lattice, q'_k proportional to q_k e^{lambda k}, which is again a sum of
  /// independent Bernoulli losses. The tail then keeps its relative accuracy
  /// instead of bottoming out at the round-off floor of the plain inversion.
  double log_tail(const Eigen::VectorXd& p);
  /// Plain inversion without shifting.
  ConditionalLossDist distribution(const Eigen::VectorXd& p);

 private:
  void fill(const std::vector<ObligorGroup>& groups);

  LossLattice lattice_;
  std::int64_t tau_;
  FftPlan plan_;
  std::vector<Complex> buffer_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> log_mag_;
  std::vector<double> phase_;
  std::vector<std::pair<std::int64_t, double>> keyed_;
  std::vector<ObligorGroup> groups_;
  std::vector<ObligorGroup> shifted_;
};

}  // namespace creditis::loss
