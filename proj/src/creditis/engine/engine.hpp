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

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "creditis/portfolio/model.hpp"
#include "creditis/portfolio/presets.hpp"
#include "creditis/tilting/newton.hpp"

namespace creditis::engine {

using port::FactorTilt;
using port::TiltMask;

/// Tilted factor laws Z ~ N(mu, Sigma), Q_j ~ Gamma(a_j - theta_j, b_j + eta_j).
struct EngineTilt {
  FactorTilt factor;
  TiltMask mask;
};

enum class Mode { kCrude, kIs, kBoth };
Mode parse_mode(const std::string& text);
std::string mode_name(Mode mode);

struct ExperimentConfig {
  std::size_t b1 = 5000;
  std::size_t b2 = 10000;
  double eps = 1e-4;
  int max_iter = 20;
  std::uint64_t seed = 1;
  TiltMask mask;
  /// Loss threshold; when unset, tau = floor(n b). A negative tau makes the
  /// event certain.
  std::optional<std::int64_t> tau;
  double b = 0.3;
  int threads = 1;
  /// Crude arm: simulate every obligor (false) or average the conditional
  /// tail probability (true).
  bool crude_conditional = false;
  /// Crude sample count; 0 means b2.
  std::size_t crude_samples = 0;

  std::int64_t resolve_tau(int n) const;
  void validate() const;
};

struct EstimateReport {
  std::string mode;
  double estimate = 0.0;
  double variance = 0.0;  // per-sample
  double std_error = 0.0;
  double vr_factor = 0.0;  // p(1-p) / variance with p = estimate; 0 when undefined
  int iterations = 0;
  bool converged = true;
  double final_residual = 0.0;
  double search_time_s = 0.0;
  double estimate_time_s = 0.0;
  std::size_t samples = 0;
};

struct SearchResult {
  EngineTilt tilt;
  tilt::TiltSolution solution;  // params = [mu; theta; eta]
  std::size_t pilot_active = 0;
  double time_s = 0.0;
};

/// Phase one: pilot under P and componentwise Newton on the g-functions.
/// Throws DegeneratePilot when no pilot sample has a positive conditional
/// tail probability.
SearchResult search_tilt_parameters(const port::PortfolioModel& model,
                                    const port::ShockSpec& shock, const ExperimentConfig& config);

/// Phase two: likelihood-ratio weighted mean of the conditional tail
/// probability under the tilted factor laws.
EstimateReport estimate_tail(const port::PortfolioModel& model, const port::ShockSpec& shock,
                             const EngineTilt& tilt, const ExperimentConfig& config);

EstimateReport crude_estimate(const port::PortfolioModel& model, const port::ShockSpec& shock,
                              const ExperimentConfig& config);

struct ExperimentResult {
  std::optional<SearchResult> search;
  std::optional<EstimateReport> crude;
  std::optional<EstimateReport> is;
};

ExperimentResult run_experiment(const port::PortfolioModel& model, const port::ShockSpec& shock,
                                const ExperimentConfig& config, Mode mode);

/// Substream tags; sample i of a phase uses stream id (tag << 60) | i.
inline constexpr std::uint64_t kPilotTag = 1;
inline constexpr std::uint64_t kEstimateTag = 2;
inline constexpr std::uint64_t kCrudeTag = 3;
inline std::uint64_t stream_id(std::uint64_t tag, std::size_t i) {
  return (tag << 60) | static_cast<std::uint64_t>(i);
}

/// Runs f(i, worker) over [0, count) in contiguous chunks, one per worker.
/// f must write its result by index so the outcome is independent of the
/// worker count.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& f) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) f(i, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace creditis::engine
