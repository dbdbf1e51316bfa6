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

#include "creditis/engine/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "creditis/common/error.hpp"
#include "creditis/distributions/special_functions.hpp"
#include "creditis/lossdist/lossdist.hpp"

namespace creditis::engine {

using port::FactorSample;
using port::PortfolioModel;
using port::ShockSpec;
using tilt::Vec;

namespace {

constexpr double kDomainMargin = 1e-6;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// P(L > tau | z, w) with one evaluator per worker.
class ConditionalTail {
 public:
  ConditionalTail(const PortfolioModel& model, std::int64_t tau, std::size_t workers)
      : model_(model), certain_(tau < 0) {
    if (tau > model.total_exposure()) {
      throw InvalidArgument("tau exceeds the total portfolio exposure");
    }
    if (!certain_) {
      const loss::LossLattice lattice(model.exposures);
      evaluators_.assign(workers, loss::TailEvaluator(lattice, tau));
    }
  }

  double operator()(const FactorSample& s, std::size_t worker) { return std::exp(log(s, worker)); }

  double log(const FactorSample& s, std::size_t worker) {
    if (certain_) return 0.0;
    return evaluators_[worker].log_tail(port::conditional_default_probs(model_, s));
  }

 private:
  const PortfolioModel& model_;
  bool certain_;
  std::vector<loss::TailEvaluator> evaluators_;
};

std::size_t worker_count(int threads, std::size_t count) {
  return std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
}

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;
};

SampleStats reduce(const std::vector<double>& y) {
  SampleStats s;
  const double n = static_cast<double>(y.size());
  for (double v : y) s.mean += v;
  s.mean /= n;
  double ss = 0.0;
  for (double v : y) ss += (v - s.mean) * (v - s.mean);
  s.variance = y.size() > 1 ? ss / (n - 1.0) : 0.0;
  return s;
}

void fill_report(EstimateReport& r, const std::vector<double>& y) {
  const SampleStats s = reduce(y);
  r.samples = y.size();
  r.estimate = s.mean;
  r.variance = s.variance;
  r.std_error = std::sqrt(s.variance / static_cast<double>(y.size()));
  r.vr_factor = (s.variance > 0.0 && s.mean > 0.0 && s.mean < 1.0)
                    ? s.mean * (1.0 - s.mean) / s.variance
                    : 0.0;
}

/// Pilot samples with positive conditional tail probability, reduced to the
/// quantities entering the conjugate weights.
struct EnginePilot {
  std::vector<Vec> sigma_inv_z;
  std::vector<Vec> z;
  std::vector<Vec> log_q;
  std::vector<Vec> q;
  std::vector<double> log_rho_sq;
  std::size_t total = 0;
};

struct Layout {
  int d = 0;
  int m = 0;
  Vec shape;
  Vec rate;
  Vec split_mu(const Vec& p) const { return p.head(d); }
  Vec split_theta(const Vec& p) const { return p.segment(d, m); }
  Vec split_eta(const Vec& p) const { return p.tail(m); }
};

struct Residuals {
  Vec mu;
  Vec theta;
  Vec eta;
};

Residuals residuals(const EnginePilot& pilot, const Layout& lay, const Vec& params) {
  const Vec mu = lay.split_mu(params);
  const Vec theta = lay.split_theta(params);
  const Vec eta = lay.split_eta(params);
  const std::size_t n = pilot.log_rho_sq.size();
  std::vector<double> lw(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double v = pilot.log_rho_sq[i] - mu.dot(pilot.sigma_inv_z[i]);
    if (lay.m > 0) v += theta.dot(pilot.log_q[i]) + eta.dot(pilot.q[i]);
    lw[i] = v;
    peak = std::max(peak, v);
  }
  if (!std::isfinite(peak)) throw NumericalError("conjugate weights are not finite");
  double total = 0.0;
  Vec ez = Vec::Zero(lay.d);
  Vec elq = Vec::Zero(lay.m);
  Vec eq = Vec::Zero(lay.m);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(lw[i] - peak);
    total += w;
    ez += w * pilot.z[i];
    if (lay.m > 0) {
      elq += w * pilot.log_q[i];
      eq += w * pilot.q[i];
    }
  }
  Residuals r;
  r.mu = mu - ez / total;
  r.theta.resize(lay.m);
  r.eta.resize(lay.m);
  for (int j = 0; j < lay.m; ++j) {
    const double s = lay.shape[j] - theta[j];
    const double b = lay.rate[j] + eta[j];
    r.theta[j] = dist::digamma(s) - std::log(b) - elq[j] / total;
    r.eta[j] = s / b - eq[j] / total;
  }
  return r;
}

bool params_inside(const Layout& lay, const Vec& params, double margin) {
  if (!params.allFinite()) return false;
  for (int j = 0; j < lay.m; ++j) {
    const double th = params[lay.d + j];
    const double et = params[lay.d + lay.m + j];
    if (!(lay.shape[j] - th > margin)) return false;
    if (!(lay.rate[j] + et > margin)) return false;
  }
  return true;
}

}  // namespace

Mode parse_mode(const std::string& text) {
  if (text == "crude") return Mode::kCrude;
  if (text == "is") return Mode::kIs;
  if (text == "both") return Mode::kBoth;
  throw InvalidArgument("mode must be crude, is or both (got '" + text + "')");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::kCrude:
      return "crude";
    case Mode::kIs:
      return "is";
    case Mode::kBoth:
      return "both";
  }
  return "both";
}

std::int64_t ExperimentConfig::resolve_tau(int n) const {
  return tau ? *tau : port::tau_from_b(n, b);
}

void ExperimentConfig::validate() const {
  if (b1 < 1 || b2 < 1) throw InvalidArgument("B1 and B2 must be at least 1");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (threads < 1) throw InvalidArgument("threads must be at least 1");
  if (!tau && !(b >= 0.0)) throw InvalidArgument("b must be non-negative");
  if (mask.sigma) {
    throw InvalidArgument("covariance tilting of the factors is not supported by the engine");
  }
}

SearchResult search_tilt_parameters(const PortfolioModel& model, const ShockSpec& shock,
                                    const ExperimentConfig& config) {
  config.validate();
  shock.validate(model.d());
  const auto start = std::chrono::steady_clock::now();
  Layout lay;
  lay.d = model.d();
  lay.m = shock.gamma_count(lay.d);
  lay.shape.resize(lay.m);
  lay.rate.resize(lay.m);
  for (int j = 0; j < lay.m; ++j) {
    lay.shape[j] = shock.gamma_shape(j);
    lay.rate[j] = shock.gamma_rate(j);
  }

  // Pilot under P.
  const std::int64_t tau = config.resolve_tau(model.n());
  const std::size_t workers = worker_count(config.threads, config.b1);
  ConditionalTail rho(model, tau, workers);
  const port::TiltedLaw base(model, shock, FactorTilt::zero(lay.d, lay.m));
  std::vector<FactorSample> samples(config.b1);
  std::vector<double> log_rhos(config.b1);
  parallel_for(config.b1, config.threads, [&](std::size_t i, std::size_t w) {
    dist::RandomStream stream(config.seed, stream_id(kPilotTag, i));
    samples[i] = base.sample(stream);
    log_rhos[i] = rho.log(samples[i], w);
  });
  EnginePilot pilot;
  pilot.total = config.b1;
  const Eigen::LLT<Eigen::MatrixXd> cov_llt(model.factor_cov);
  for (std::size_t i = 0; i < config.b1; ++i) {
    if (!std::isfinite(log_rhos[i])) continue;
    pilot.z.push_back(samples[i].z);
    pilot.sigma_inv_z.push_back(cov_llt.solve(samples[i].z));
    pilot.q.push_back(samples[i].q);
    pilot.log_q.push_back(samples[i].q.array().log().matrix());
    pilot.log_rho_sq.push_back(2.0 * log_rhos[i]);
  }
  if (pilot.log_rho_sq.empty()) {
    throw DegeneratePilot("no pilot sample has a positive conditional tail probability; "
                          "increase B1 or lower tau");
  }

  // Componentwise Newton over the active blocks.
  struct Block {
    int offset;
    int size;
  };
  std::vector<Block> blocks;
  if (config.mask.mu) blocks.push_back({0, lay.d});
  if (config.mask.theta && lay.m > 0) blocks.push_back({lay.d, lay.m});
  if (config.mask.eta && lay.m > 0) blocks.push_back({lay.d + lay.m, lay.m});

  Vec params = Vec::Zero(lay.d + 2 * lay.m);
  auto block_residual = [&](const Residuals& r, const Block& b) -> Vec {
    if (b.offset == 0) return r.mu;
    if (b.offset == lay.d) return r.theta;
    return r.eta;
  };
  auto total_norm = [&](const Residuals& r, bool* all_below) {
    double total = 0.0;
    bool ok = true;
    for (const auto& b : blocks) {
      const double nb = block_residual(r, b).squaredNorm();
      total += nb;
      ok = ok && nb < config.eps;
    }
    if (all_below) *all_below = ok;
    return total;
  };

  SearchResult out;
  out.pilot_active = pilot.log_rho_sq.size();
  tilt::TiltSolution& sol = out.solution;
  bool done = false;
  sol.final_residual = total_norm(residuals(pilot, lay, params), &done);
  sol.residual_history.push_back(sol.final_residual);
  while (!done && sol.iterations < config.max_iter) {
    bool moved = false;
    for (const auto& b : blocks) {
      const tilt::ResidualFn g = [&](const Vec& x) {
        Vec p = params;
        p.segment(b.offset, b.size) = x;
        return block_residual(residuals(pilot, lay, p), b);
      };
      const tilt::DomainFn inside = [&](const Vec& x) {
        Vec p = params;
        p.segment(b.offset, b.size) = x;
        return params_inside(lay, p, kDomainMargin);
      };
      const Vec x0 = params.segment(b.offset, b.size);
      const Vec g0 = g(x0);
      if (g0.squaredNorm() < config.eps * 1e-6) continue;
      const tilt::NewtonStep step = tilt::newton_step(g, inside, x0, g0, 40);
      if (step.accepted) {
        params.segment(b.offset, b.size) = step.x;
        moved = true;
      }
    }
    ++sol.iterations;
    sol.final_residual = total_norm(residuals(pilot, lay, params), &done);
    sol.residual_history.push_back(sol.final_residual);
    if (!moved) break;
  }
  sol.converged = done;
  sol.params = params;
  out.tilt.mask = config.mask;
  out.tilt.factor.mu = lay.split_mu(params);
  out.tilt.factor.theta = lay.split_theta(params);
  out.tilt.factor.eta = lay.split_eta(params);
  out.time_s = seconds_since(start);
  return out;
}

EstimateReport estimate_tail(const PortfolioModel& model, const ShockSpec& shock,
                             const EngineTilt& tilt, const ExperimentConfig& config) {
  config.validate();
  shock.validate(model.d());
  const auto start = std::chrono::steady_clock::now();
  const port::TiltedLaw law(model, shock, tilt.factor);
  const std::int64_t tau = config.resolve_tau(model.n());
  ConditionalTail rho(model, tau, worker_count(config.threads, config.b2));
  std::vector<double> y(config.b2);
  parallel_for(config.b2, config.threads, [&](std::size_t i, std::size_t w) {
    dist::RandomStream stream(config.seed, stream_id(kEstimateTag, i));
    const FactorSample s = law.sample(stream);
    const double r = rho(s, w);
    const double lr = std::exp(law.log_likelihood_ratio(s));
    if (!std::isfinite(lr)) {
      throw NumericalError("non-finite likelihood ratio; the tilt is outside its domain");
    }
    y[i] = r * lr;
  });
  EstimateReport rep;
  rep.mode = "is";
  fill_report(rep, y);
  rep.estimate_time_s = seconds_since(start);
  return rep;
}

EstimateReport crude_estimate(const PortfolioModel& model, const ShockSpec& shock,
                              const ExperimentConfig& config) {
  config.validate();
  shock.validate(model.d());
  const auto start = std::chrono::steady_clock::now();
  const std::size_t count = config.crude_samples ? config.crude_samples : config.b2;
  const std::int64_t tau = config.resolve_tau(model.n());
  const port::TiltedLaw base(model, shock, FactorTilt::zero(model.d(), shock.gamma_count(model.d())));
  std::vector<double> y(count);
  if (config.crude_conditional) {
    ConditionalTail rho(model, tau, worker_count(config.threads, count));
    parallel_for(count, config.threads, [&](std::size_t i, std::size_t w) {
      dist::RandomStream stream(config.seed, stream_id(kCrudeTag, i));
      y[i] = rho(base.sample(stream), w);
    });
  } else {
    parallel_for(count, config.threads, [&](std::size_t i, std::size_t) {
      dist::RandomStream stream(config.seed, stream_id(kCrudeTag, i));
      const FactorSample s = base.sample(stream);
      y[i] = port::simulate_loss(model, s, stream) > tau ? 1.0 : 0.0;
    });
  }
  EstimateReport rep;
  rep.mode = "crude";
  fill_report(rep, y);
  if (!config.crude_conditional) {
    // Bernoulli convention: the per-sample variance is p(1 - p).
    rep.variance = rep.estimate * (1.0 - rep.estimate);
    rep.std_error = std::sqrt(rep.variance / static_cast<double>(count));
    rep.vr_factor = rep.variance > 0.0 ? 1.0 : 0.0;
  }
  rep.estimate_time_s = seconds_since(start);
  return rep;
}

ExperimentResult run_experiment(const PortfolioModel& model, const ShockSpec& shock,
                                const ExperimentConfig& config, Mode mode) {
  ExperimentResult out;
  if (mode == Mode::kCrude || mode == Mode::kBoth) out.crude = crude_estimate(model, shock, config);
  if (mode == Mode::kIs || mode == Mode::kBoth) {
    out.search = search_tilt_parameters(model, shock, config);
    EstimateReport rep = estimate_tail(model, shock, out.search->tilt, config);
    rep.iterations = out.search->solution.iterations;
    rep.converged = out.search->solution.converged;
    rep.final_residual = out.search->solution.final_residual;
    rep.search_time_s = out.search->time_s;
    out.is = rep;
  }
  return out;
}

}  // namespace creditis::engine
