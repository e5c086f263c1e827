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

#ifndef HVAWD_HIERARCHY_H_
#define HVAWD_HIERARCHY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hvawd/features.h"
#include "hvawd/forecaster.h"

namespace hvawd {

// Discount grid for one feature count m. With eta_min = 2m, eta_max = mT:
//   etas   = { min(eta_min b^i, eta_max) : i = 0, 1, ... }  (deduplicated)
//   gammas = { 0 } followed by eta / (1 + eta) for each eta.
// gammas[0] == 0 is the hint passthrough slot; size() counts it.
struct GammaGrid {
  double base = 2.0;
  int features = 1;
  std::int64_t horizon = 1;
  std::vector<double> etas;
  std::vector<double> gammas;

  int size() const { return static_cast<int>(gammas.size()); }
};

GammaGrid BuildGammaGrid(int features, std::int64_t horizon, double base);

// Feature-count grid {0} u {2^j : j = 0..ceil(log2(T) / 2)}; 0 is the hint
// expert.
struct FeatureGrid {
  std::int64_t horizon = 1;
  std::vector<int> entries;

  int size() const { return static_cast<int>(entries.size()); }
};

FeatureGrid BuildFeatureGrid(std::int64_t horizon);

struct HierarchyOptions {
  std::int64_t horizon = 1;
  KernelSpec kernel;
  double grid_base = 2.0;
  double level2_ridge = 1.0;
  HintPolicy hint;
  std::uint64_t master_seed = 0;
};

inline constexpr double kTopLevelRidge = 1.0;

// Everything the three levels predicted in one round.
struct StepTrace {
  std::int64_t step = 0;
  double hint = 0.0;
  double prediction = 0.0;
  // One vector per feature block (blocks ordered like feature_grid().entries
  // without the 0). Entry 0 is the gamma = 0 hint slot.
  std::vector<Eigen::VectorXd> base_predictions;
  // Level-3 inputs; entry 0 is the m = 0 hint expert.
  Eigen::VectorXd feature_predictions;
};

// Base experts and level-2 aggregator for one feature count m.
struct FeatureBlock {
  int features;
  FeatureMap map;
  GammaGrid grid;
  // Discounted forecasters for grid.gammas[1..], ridge 1/m, sharing `map`.
  std::vector<DiscountedVaw> experts;
  VawAggregator aggregator;
  // Labels delivered to the gamma = 0 slot.
  std::int64_t passthrough_steps = 0;
};

// Three-level forecaster: discounted base experts per (m, gamma), a VAW
// aggregator per m over its gamma grid, and a top VAW (ridge 1) over the
// per-m aggregators plus the hint expert.
class HierarchyForecaster {
 public:
  explicit HierarchyForecaster(const HierarchyOptions& options);

  // `external_hint` feeds HintKind::kExternal and is ignored otherwise.
  StepTrace Predict(const Eigen::VectorXd& x,
                    std::optional<double> external_hint = std::nullopt);
  void Commit(const StepTrace& trace, double label);

  const HierarchyOptions& options() const { return options_; }
  const FeatureGrid& feature_grid() const { return feature_grid_; }
  const std::vector<FeatureBlock>& blocks() const { return blocks_; }
  const VawAggregator& top() const { return top_; }
  std::int64_t steps() const { return steps_; }

  // Grid slots across all blocks, including each block's hint slot.
  int BaseExpertCount() const;
  // Base slots + level-2 aggregators + the top aggregator; every one of them
  // receives each committed label.
  int CommitTargetCount() const;

 private:
  HierarchyOptions options_;
  FeatureGrid feature_grid_;
  std::vector<FeatureBlock> blocks_;
  VawAggregator top_;
  std::int64_t steps_ = 0;
  bool staged_ = false;
  std::optional<double> last_label_;
  std::vector<Eigen::VectorXd> features_;  // per-block scratch
};

}  // namespace hvawd

#endif  // HVAWD_HIERARCHY_H_
