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

#include "creditis/lossdist/fft.hpp"

#include <cmath>
#include <numbers>

#include "creditis/common/error.hpp"

namespace creditis::loss {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t size) : size_(size) {
  if (!is_power_of_two(size)) throw InvalidArgument("FFT size must be a power of two");
  int bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  reversed_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    reversed_[i] = r;
  }
  twiddles_.resize(size / 2);
  for (std::size_t k = 0; k < size / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size);
    twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
  }
}

void FftPlan::transform(std::vector<Complex>& a, bool conjugate) const {
  if (a.size() != size_) throw InvalidArgument("FFT input has the wrong length");
  for (std::size_t i = 0; i < size_; ++i) {
    if (i < reversed_[i]) std::swap(a[i], a[reversed_[i]]);
  }
  for (std::size_t len = 2; len <= size_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = size_ / len;
    for (std::size_t start = 0; start < size_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        Complex w = twiddles_[j * stride];
        if (conjugate) w = std::conj(w);
        const Complex u = a[start + j];
        const Complex v = a[start + j + half] * w;
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
  }
}

void FftPlan::forward(std::vector<Complex>& data) const { transform(data, false); }

void FftPlan::inverse(std::vector<Complex>& data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data) v *= scale;
}

}  // namespace creditis::loss
