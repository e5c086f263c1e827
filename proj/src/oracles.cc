// Copyright 2026 The HVAW-D Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hvawd/oracles.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace hvawd::oracle {

Eigen::MatrixXd DiscountedInverse(const Eigen::MatrixXd& inv,
                                  const Eigen::VectorXd& v, double gamma) {
  const Eigen::MatrixXd sigma = gamma * inv.fullPivLu().inverse() +
                                v * v.transpose();
  return sigma.fullPivLu().inverse();
}

Eigen::VectorXd DiscountedFtrlArgmin(double gamma, double ridge,
                                     std::span<const Eigen::VectorXd> features,
                                     std::span<const double> labels,
                                     double hint) {
  const std::size_t t = features.size();
  const Eigen::Index m = features[0].size();
  // Hessian and linear term of the objective, one loss at a time.
  Eigen::MatrixXd hessian = features[t - 1] * features[t - 1].transpose();
  Eigen::VectorXd linear = hint * features[t - 1];
  hessian += gamma * std::pow(gamma, static_cast<double>(t - 1)) * ridge *
             Eigen::MatrixXd::Identity(m, m);
  for (std::size_t s = 1; s < t; ++s) {
    const double weight = gamma * std::pow(gamma, static_cast<double>(t - 1 - s));
    hessian += weight * features[s - 1] * features[s - 1].transpose();
    linear += weight * labels[s - 1] * features[s - 1];
  }
  return hessian.ldlt().solve(linear);
}

Eigen::VectorXd DiscountedSum(double gamma,
                              std::span<const Eigen::VectorXd> features,
                              std::span<const double> labels) {
  const std::size_t t = features.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(features[0].size());
  for (std::size_t s = 1; s <= t; ++s) {
    sum += std::pow(gamma, static_cast<double>(t - s)) * labels[s - 1] *
           features[s - 1];
  }
  return sum;
}

Eigen::MatrixXd DiscountedGram(double gamma, double ridge,
                               std::span<const Eigen::VectorXd> features) {
  const std::size_t t = features.size();
  const Eigen::Index m = features[0].size();
  Eigen::MatrixXd sigma = std::pow(gamma, static_cast<double>(t)) * ridge *
                          Eigen::MatrixXd::Identity(m, m);
  for (std::size_t s = 1; s <= t; ++s) {
    sigma += std::pow(gamma, static_cast<double>(t - s)) * features[s - 1] *
             features[s - 1].transpose();
  }
  return sigma;
}

double VawPrediction(double ridge, std::span<const Eigen::VectorXd> features,
                     std::span<const double> labels) {
  const std::size_t t = features.size();
  const Eigen::Index m = features[0].size();
  Eigen::MatrixXd a = ridge * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (std::size_t s = 0; s < t; ++s) {
    a += features[s] * features[s].transpose();
    if (s + 1 < t) rhs += labels[s] * features[s];
  }
  return features[t - 1].dot(a.ldlt().solve(rhs));
}

Eigen::VectorXd RidgeComparator(double ridge,
                                std::span<const Eigen::VectorXd> features,
                                std::span<const double> labels) {
  const Eigen::Index m = features[0].size();
  Eigen::MatrixXd a = ridge * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (std::size_t s = 0; s < features.size(); ++s) {
    a += features[s] * features[s].transpose();
    rhs += labels[s] * features[s];
  }
  return a.ldlt().solve(rhs);
}

std::vector<double> EnumerateEtaGrid(int features, std::int64_t horizon,
                                     double base) {
  const double eta_min = 2.0 * features;
  const double eta_max = static_cast<double>(features) * horizon;
  // b^i >= T/2 once i >= log_b(T/2); 4096 indices cover every b >= 1.01.
  std::set<double> etas;
  for (int i = 0; i < 4096; ++i) {
    etas.insert(std::min(eta_min * std::pow(base, i), eta_max));
  }
  return {etas.begin(), etas.end()};
}

std::vector<int> EnumerateFeatureGrid(std::int64_t horizon) {
  const int top = static_cast<int>(
      std::ceil(0.5 * std::log2(static_cast<double>(horizon))));
  std::set<int> entries{0};
  for (int j = 0; j <= top; ++j) entries.insert(1 << j);
  return {entries.begin(), entries.end()};
}

}  // namespace hvawd::oracle
