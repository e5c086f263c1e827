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

#ifndef HVAWD_ORACLES_H_
#define HVAWD_ORACLES_H_

// Brute-force reference computations. Nothing in here shares code with the
// recursive implementations it is used to check.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hvawd::oracle {

// (gamma inv^{-1} + v v')^{-1} by two dense LU inversions.
Eigen::MatrixXd DiscountedInverse(const Eigen::MatrixXd& inv,
                                  const Eigen::VectorXd& v, double gamma);

// Minimizer of
//   h_t(w) + gamma sum_{s=0}^{t-1} gamma^{t-1-s} l_s(w),  l_0 = lambda/2 |w|^2,
// for t = features.size(), from the normal equations assembled term by term.
// `labels` holds y_1..y_{t-1}.
Eigen::VectorXd DiscountedFtrlArgmin(double gamma, double ridge,
                                     std::span<const Eigen::VectorXd> features,
                                     std::span<const double> labels,
                                     double hint);

// sum_{s<=t} gamma^{t-s} y_s phi_s with explicit powers.
Eigen::VectorXd DiscountedSum(double gamma,
                              std::span<const Eigen::VectorXd> features,
                              std::span<const double> labels);

// Sigma_t = gamma^t lambda I + sum_{s<=t} gamma^{t-s} phi_s phi_s'.
Eigen::MatrixXd DiscountedGram(double gamma, double ridge,
                               std::span<const Eigen::VectorXd> features);

// Standard VAW prediction at round t = features.size():
//   phi_t' (lambda I + sum_{s<=t} phi_s phi_s')^{-1} sum_{s<t} y_s phi_s.
double VawPrediction(double ridge, std::span<const Eigen::VectorXd> features,
                     std::span<const double> labels);

// argmin_u lambda/2 |u|^2 + sum_t (u.phi_t - y_t)^2 / 2.
Eigen::VectorXd RidgeComparator(double ridge,
                                std::span<const Eigen::VectorXd> features,
                                std::span<const double> labels);

// Grids enumerated straight from their set-builder definitions.
std::vector<double> EnumerateEtaGrid(int features, std::int64_t horizon,
                                     double base);
std::vector<int> EnumerateFeatureGrid(std::int64_t horizon);

}  // namespace hvawd::oracle

#endif  // HVAWD_ORACLES_H_
