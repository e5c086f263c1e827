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

#include "hvawd/forecaster.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hvawd/errors.h"

namespace hvawd {
namespace {

// tr(Sigma^{-1}) tr(Sigma) bounds the condition number of Sigma from above.
// Past kResetCondition the inverse is re-projected so that every eigenvalue
// of Sigma is at least kEigenFloor tr(Sigma).
constexpr double kResetCondition = 1e10;
constexpr double kEigenFloor = 1e-8;

}  // namespace

double WoodburyUpdate(const Eigen::MatrixXd& inv, const Eigen::VectorXd& v,
                      double gamma, Eigen::MatrixXd& out,
                      Eigen::VectorXd& inv_v) {
  const Eigen::Index m = v.size();
  inv_v.noalias() = inv * v;
  const double denom = gamma + v.dot(inv_v);
  if (!std::isfinite(denom) || !(denom > 0.0) || !inv_v.allFinite()) {
    throw NumericError("woodbury denominator is not a positive finite number");
  }
  out.resize(m, m);
  const double inv_gamma = 1.0 / gamma;
  const double inv_denom = 1.0 / denom;
  // Upper triangle of the symmetrized update, mirrored.
  for (Eigen::Index j = 0; j < m; ++j) {
    const double qj = inv_v(j) * inv_denom;
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double sym = 0.5 * (inv(i, j) + inv(j, i));
      const double value = inv_gamma * (sym - inv_v(i) * qj);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return denom;
}

Eigen::MatrixXd WoodburyStep(const Eigen::MatrixXd& inv,
                             const Eigen::VectorXd& v, double gamma) {
  if (inv.rows() != inv.cols() || inv.rows() != v.size()) {
    throw InvalidArgument("woodbury step needs a square matrix matching v");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("discount must lie in (0, 1]");
  }
  if (!inv.allFinite() || !v.allFinite()) {
    throw NumericError("woodbury step on non-finite input");
  }
  Eigen::MatrixXd out;
  Eigen::VectorXd inv_v;
  WoodburyUpdate(inv, v, gamma, out, inv_v);
  return out;
}

DiscountedVaw::DiscountedVaw(int dimension, double discount, double ridge)
    : discount_(discount), ridge_(ridge) {
  if (dimension < 1) throw InvalidArgument("forecaster dimension must be >= 1");
  if (!(discount > 0.0 && discount <= 1.0)) {
    throw InvalidArgument("discount must lie in (0, 1]");
  }
  if (!(ridge > 0.0) || !std::isfinite(ridge)) {
    throw InvalidArgument("ridge weight must be positive");
  }
  inv_sigma_ = Eigen::MatrixXd::Identity(dimension, dimension) / ridge;
  trace_sigma_ = ridge * dimension;
  disc_sum_ = Eigen::VectorXd::Zero(dimension);
  staged_inv_.resize(dimension, dimension);
  staged_features_.resize(dimension);
  inv_v_.resize(dimension);
}

StepTicket DiscountedVaw::Predict(const Eigen::VectorXd& features,
                                  double hint) {
  if (staged_) throw ProtocolError("predict called twice without commit");
  if (features.size() != disc_sum_.size()) {
    throw InvalidArgument("feature vector has length " +
                          std::to_string(features.size()) + ", expected " +
                          std::to_string(disc_sum_.size()));
  }
  if (!features.allFinite() || !std::isfinite(hint)) {
    throw NumericError("non-finite forecaster input", steps_ + 1);
  }
  const double denom =
      WoodburyUpdate(inv_sigma_, features, discount_, staged_inv_, inv_v_);
  // Sigma_t^{-1} phi = inv_v / denom, so the prediction needs no second
  // matrix-vector product.
  const double prediction =
      (hint * features.dot(inv_v_) + discount_ * inv_v_.dot(disc_sum_)) /
      denom;
  if (!std::isfinite(prediction)) {
    throw NumericError("non-finite prediction", steps_ + 1);
  }
  staged_features_ = features;
  staged_ = true;
  return {prediction, steps_ + 1};
}

void DiscountedVaw::Commit(const StepTicket& ticket, double label) {
  if (!staged_ || ticket.step != steps_ + 1) {
    throw ProtocolError("stale or unmatched step ticket");
  }
  if (!std::isfinite(label)) {
    throw NumericError("non-finite label", ticket.step);
  }
  disc_sum_ = discount_ * disc_sum_ + label * staged_features_;
  std::swap(inv_sigma_, staged_inv_);
  trace_sigma_ = discount_ * trace_sigma_ + staged_features_.squaredNorm();
  staged_ = false;
  ++steps_;
  if (inv_sigma_.trace() * trace_sigma_ > kResetCondition) Recondition();
}

// Long runs with gamma < 1 let the ridge decay as gamma^t. When the features
// leave directions unexcited, Sigma's spectrum falls below double precision
// and the rank-one recursion loses definiteness. The reset clamps the
// inverse's spectrum, which perturbs Sigma by at most kEigenFloor tr(Sigma)
// in the affected directions.
void DiscountedVaw::Recondition() {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inv_sigma_);
  if (eig.info() != Eigen::Success) {
    throw NumericError("eigen-decomposition of the inverse failed", steps_);
  }
  const double cap = 1.0 / (kEigenFloor * trace_sigma_);
  Eigen::VectorXd values = eig.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values(i) > 0.0) || values(i) > cap) values(i) = cap;
  }
  const Eigen::MatrixXd& q = eig.eigenvectors();
  inv_sigma_.noalias() = q * values.asDiagonal() * q.transpose();
  inv_sigma_ = 0.5 * (inv_sigma_ + inv_sigma_.transpose()).eval();
  ++conditioning_resets_;
}

VawAggregator::VawAggregator(int experts, double ridge)
    : core_(experts, 1.0, ridge) {}

StepTicket VawAggregator::Predict(const Eigen::VectorXd& expert_predictions) {
  return core_.Predict(expert_predictions, 0.0);
}

void VawAggregator::Commit(const StepTicket& ticket, double label) {
  core_.Commit(ticket, label);
}

double EmitHint(const HintPolicy& policy, std::int64_t t,
                std::optional<double> last_label,
                std::optional<double> external) {
  if (t < 1) throw InvalidArgument("steps are 1-based");
  if (!(policy.clip >= 0.0)) throw InvalidArgument("hint clip must be >= 0");
  if (t == 1) return 0.0;
  const auto clamp = [&](double v) {
    return std::clamp(v, -policy.clip, policy.clip);
  };
  switch (policy.kind) {
    case HintKind::kZero:
      return 0.0;
    case HintKind::kLastLabel:
      return last_label ? clamp(*last_label) : 0.0;
    case HintKind::kExternal:
      if (!external) throw InvalidArgument("external hint policy needs a value");
      return clamp(*external);
  }
  return 0.0;
}

}  // namespace hvawd
