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

#ifndef HVAWD_FORECASTER_H_
#define HVAWD_FORECASTER_H_

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

namespace hvawd {

// Returned by Predict and handed back to Commit. `step` is the 1-based index
// of the pending round; a ticket from any other round is stale.
struct StepTicket {
  double prediction = 0.0;
  std::int64_t step = 0;
};

// One rank-one discounted inverse update:
//   (gamma * inv^{-1} + v v')^{-1}
//     = (1/gamma) (inv - inv v v' inv / (gamma + v' inv v)).
// The result is symmetrized. Throws NumericError on non-finite input or
// a non-positive denominator.
Eigen::MatrixXd WoodburyStep(const Eigen::MatrixXd& inv,
                             const Eigen::VectorXd& v, double gamma);

// Allocation-free form used in the hot path. `inv_v` receives inv * v and
// `out` (which must not alias `inv`) the updated inverse. Returns the
// denominator gamma + v' inv v.
double WoodburyUpdate(const Eigen::MatrixXd& inv, const Eigen::VectorXd& v,
                      double gamma, Eigen::MatrixXd& out,
                      Eigen::VectorXd& inv_v);

// Discounted Vovk-Azoury-Warmuth forecaster over a fixed m-dimensional
// feature space. Round t plays
//
//   w_t = argmin_w  h_t(w) + gamma sum_{s=0}^{t-1} gamma^{t-1-s} l_s(w)
//       = Sigma_t^{-1} [hint_t phi_t + gamma b_{t-1}],
//
// with l_0(w) = lambda/2 |w|^2, h_t the hinted loss, Sigma_t = phi_t phi_t' +
// gamma Sigma_{t-1}, Sigma_0 = lambda I, and b_t = sum_s gamma^{t-s} y_s phi_s.
// Rounds are two-phase: Predict stages Sigma_t^{-1}, Commit folds in the label.
class DiscountedVaw {
 public:
  // gamma in (0, 1], ridge > 0. gamma = 0 is not representable here; the
  // hierarchy realizes that grid point as a hint passthrough.
  DiscountedVaw(int dimension, double discount, double ridge);

  StepTicket Predict(const Eigen::VectorXd& features, double hint);
  void Commit(const StepTicket& ticket, double label);

  int dimension() const { return static_cast<int>(disc_sum_.size()); }
  double discount() const { return discount_; }
  double ridge() const { return ridge_; }
  // Completed rounds.
  std::int64_t steps() const { return steps_; }
  bool staged() const { return staged_; }
  // Sigma_t^{-1} after the last commit.
  const Eigen::MatrixXd& inv_sigma() const { return inv_sigma_; }
  // b_t after the last commit.
  const Eigen::VectorXd& disc_sum() const { return disc_sum_; }
  // Times the inverse was re-projected to a bounded condition number.
  std::int64_t conditioning_resets() const { return conditioning_resets_; }

 private:
  void Recondition();

  double discount_;
  double ridge_;
  std::int64_t steps_ = 0;
  std::int64_t conditioning_resets_ = 0;
  bool staged_ = false;
  double trace_sigma_ = 0.0;
  Eigen::MatrixXd inv_sigma_;
  Eigen::VectorXd disc_sum_;
  Eigen::MatrixXd staged_inv_;
  Eigen::VectorXd staged_features_;
  Eigen::VectorXd inv_v_;
};

// Undiscounted VAW over an M-vector of expert predictions: a DiscountedVaw
// with gamma = 1 and zero hints. Used at both aggregation levels.
class VawAggregator {
 public:
  VawAggregator(int experts, double ridge);

  StepTicket Predict(const Eigen::VectorXd& expert_predictions);
  void Commit(const StepTicket& ticket, double label);

  int experts() const { return core_.dimension(); }
  double ridge() const { return core_.ridge(); }
  std::int64_t steps() const { return core_.steps(); }
  const Eigen::MatrixXd& inv_sigma() const { return core_.inv_sigma(); }
  // sum_s y_s z_s.
  const Eigen::VectorXd& label_sum() const { return core_.disc_sum(); }

 private:
  DiscountedVaw core_;
};

enum class HintKind { kZero, kLastLabel, kExternal };

struct HintPolicy {
  HintKind kind = HintKind::kLastLabel;
  double clip = 1.0;  // every emitted hint satisfies |hint| <= clip
};

// Hint for round t (1-based). Round 1 always gets 0. kLastLabel clamps the
// previous label, kExternal clamps `external` and throws InvalidArgument
// when it is missing.
double EmitHint(const HintPolicy& policy, std::int64_t t,
                std::optional<double> last_label,
                std::optional<double> external = std::nullopt);

}  // namespace hvawd

#endif  // HVAWD_FORECASTER_H_
