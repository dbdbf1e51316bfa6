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

#include <complex>
#include <cstddef>
#include <vector>

namespace creditis::loss {

using Complex = std::complex<double>;

/// Iterative radix-2 transform with cached twiddles and bit reversal.
class FftPlan {
 public:
  /// `size` must be a power of two.
  explicit FftPlan(std::size_t size);

  std::size_t size() const { return size_; }

  /// Forward: A_k = sum_m a_m e^{-2 pi i k m / N}. No scaling.
  void forward(std::vector<Complex>& data) const;
  /// Inverse with the 1/N factor: a_m = (1/N) sum_k A_k e^{2 pi i k m / N}.
  void inverse(std::vector<Complex>& data) const;

 private:
  void transform(std::vector<Complex>& data, bool conjugate) const;

  std::size_t size_;
  std::vector<std::size_t> reversed_;
  std::vector<Complex> twiddles_;  // e^{-2 pi i k / N}, k < N/2
};

bool is_power_of_two(std::size_t n);

}  // namespace creditis::loss
