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

#include "creditis/families/mvn_family.hpp"

#include "creditis/common/error.hpp"

namespace creditis::fam {

MvnFamily::MvnFamily(int d) : d_(d) {
  if (d < 1) throw InvalidArgument("MvnFamily: dimension must be positive");
}

std::vector<std::string> MvnFamily::param_names() const {
  std::vector<std::string> names;
  for (int i = 1; i <= d_; ++i) names.push_back("theta" + std::to_string(i));
  for (int i = 1; i <= d_ + 1; ++i) names.push_back("eta" + std::to_string(i));
  return names;
}

Vec MvnFamily::statistics(const Vec& x) const {
  Vec h(2 * d_ + 1);
  double total = 0.0;
  double squares = 0.0;
  for (int i = 0; i < d_; ++i) {
    h[i] = x[i];
    h[d_ + i] = x[i] * x[i];
    total += x[i];
    squares += x[i] * x[i];
  }
  h[2 * d_] = total * total - squares;
  return h;
}

Eigen::MatrixXd MvnFamily::m_matrix(const Vec& t) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d_, d_, t[2 * d_]);
  for (int i = 0; i < d_; ++i) m(i, i) = t[d_ + i];
  return m;
}

Eigen::MatrixXd MvnFamily::grad_m(int i) const {
  if (i < 1 || i > d_ + 1) throw InvalidArgument("MvnFamily::grad_m: index out of range");
  if (i <= d_) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d_, d_);
    b(i - 1, i - 1) = 1.0;
    return b;
  }
  return Eigen::MatrixXd::Ones(d_, d_) - Eigen::MatrixXd::Identity(d_, d_);
}

bool MvnFamily::in_domain(const Vec& t, double margin) const {
  if (t.size() != 2 * d_ + 1 || !t.allFinite()) return false;
  const Eigen::MatrixXd m = m_matrix(t);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d_, d_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> minus(id - 2.0 * m, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus(id + 2.0 * m, Eigen::EigenvaluesOnly);
  return minus.eigenvalues().minCoeff() > 2.0 * margin &&
         plus.eigenvalues().minCoeff() > 2.0 * margin;
}

double MvnFamily::psi(const Vec& t) const {
  if (!in_domain(t)) throw DomainError("mvn psi: I - 2M must be positive definite");
  const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(d_, d_) - 2.0 * m_matrix(t);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  double log_det = 0.0;
  for (int i = 0; i < d_; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  const Vec theta = t.head(d_);
  return -0.5 * log_det + 0.5 * theta.dot(llt.solve(theta));
}

dist::MvnParams MvnFamily::tilted_law(const Vec& t) const {
  if (!in_domain(t)) throw DomainError("mvn tilted_law: I - 2M must be positive definite");
  const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(d_, d_) - 2.0 * m_matrix(t);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(d_, d_));
  cov = 0.5 * (cov + cov.transpose());
  Vec mean = cov * t.head(d_);
  return dist::MvnParams(std::move(mean), std::move(cov));
}

Vec MvnFamily::grad_psi(const Vec& t) const {
  const auto law = tilted_law(t);
  const Vec& mu = law.mean();
  const Eigen::MatrixXd& cov = law.covariance();
  Vec g(2 * d_ + 1);
  g.head(d_) = mu;
  for (int i = 1; i <= d_ + 1; ++i) {
    const Eigen::MatrixXd b = grad_m(i);
    g[d_ + i - 1] = (cov * b).trace() + mu.dot(b * mu);
  }
  return g;
}

Vec MvnFamily::from_moments(const Vec& mean, const Eigen::MatrixXd& cov) const {
  const dist::MvnParams law(mean, cov);
  const Eigen::MatrixXd prec = Eigen::LLT<Eigen::MatrixXd>(cov).solve(
      Eigen::MatrixXd::Identity(d_, d_));
  const Eigen::MatrixXd m = 0.5 * (Eigen::MatrixXd::Identity(d_, d_) - prec);
  Vec t(2 * d_ + 1);
  t.head(d_) = prec * mean;
  for (int i = 0; i < d_; ++i) t[d_ + i] = m(i, i);
  t[2 * d_] = d_ > 1 ? m(0, 1) : 0.0;
  return t;
}

Vec MvnFamily::sample_base(dist::RandomStream& stream) const {
  Vec x(d_);
  for (int i = 0; i < d_; ++i) x[i] = dist::sample_std_normal(stream);
  return x;
}

Vec MvnFamily::sample_tilted(const Vec& t, dist::RandomStream& stream) const {
  return dist::sample_mvn(tilted_law(t), stream);
}

}  // namespace creditis::fam
