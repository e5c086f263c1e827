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

#include "hvawd/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hvawd/errors.h"
#include "hvawd/rng.h"

namespace hvawd {

GammaGrid BuildGammaGrid(int features, std::int64_t horizon, double base) {
  if (features < 1) throw InvalidArgument("gamma grid needs m >= 1");
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw InvalidArgument("grid base must be > 1");
  }
  GammaGrid grid;
  grid.base = base;
  grid.features = features;
  grid.horizon = horizon;
  const double eta_min = 2.0 * features;
  const double eta_max = static_cast<double>(features) * horizon;
  for (int i = 0;; ++i) {
    const double eta = std::min(eta_min * std::pow(base, i), eta_max);
    if (grid.etas.empty() || eta > grid.etas.back()) grid.etas.push_back(eta);
    if (eta >= eta_max) break;
  }
  grid.gammas.reserve(grid.etas.size() + 1);
  grid.gammas.push_back(0.0);
  for (double eta : grid.etas) grid.gammas.push_back(eta / (1.0 + eta));
  return grid;
}

FeatureGrid BuildFeatureGrid(std::int64_t horizon) {
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  // ceil(log2(T) / 2) is the least j with 4^j >= T.
  int top = 0;
  while ((std::int64_t{1} << (2 * top)) < horizon) ++top;
  FeatureGrid grid;
  grid.horizon = horizon;
  grid.entries.push_back(0);
  for (int j = 0; j <= top; ++j) grid.entries.push_back(1 << j);
  return grid;
}

HierarchyForecaster::HierarchyForecaster(const HierarchyOptions& options)
    : options_(options),
      feature_grid_(BuildFeatureGrid(options.horizon)),
      top_(feature_grid_.size(), kTopLevelRidge) {
  options_.kernel.Validate();
  if (!(options_.level2_ridge > 0.0)) {
    throw InvalidArgument("level-2 ridge weight must be positive");
  }
  if (!(options_.hint.clip >= 0.0)) {
    throw InvalidArgument("hint clip must be >= 0");
  }
  for (int m : feature_grid_.entries) {
    if (m == 0) continue;
    GammaGrid grid = BuildGammaGrid(m, options_.horizon, options_.grid_base);
    FeatureMap map = FeatureMap::Sample(
        options_.kernel, m, StableHash(options_.master_seed, "featmap", m));
    std::vector<DiscountedVaw> experts;
    experts.reserve(grid.gammas.size() - 1);
    for (std::size_t k = 1; k < grid.gammas.size(); ++k) {
      experts.emplace_back(m, grid.gammas[k], 1.0 / m);
    }
    VawAggregator aggregator(grid.size(), options_.level2_ridge);
    blocks_.push_back(FeatureBlock{m, std::move(map), std::move(grid),
                                   std::move(experts), std::move(aggregator),
                                   0});
    features_.emplace_back(m);
  }
}

StepTrace HierarchyForecaster::Predict(const Eigen::VectorXd& x,
                                       std::optional<double> external_hint) {
  if (staged_) throw ProtocolError("predict called twice without commit");
  if (x.size() != options_.kernel.dimension) {
    throw InvalidArgument("input has dimension " + std::to_string(x.size()) +
                          ", expected " +
                          std::to_string(options_.kernel.dimension));
  }
  StepTrace trace;
  trace.step = steps_ + 1;
  trace.hint = EmitHint(options_.hint, trace.step, last_label_, external_hint);
  trace.base_predictions.resize(blocks_.size());
  trace.feature_predictions.resize(feature_grid_.size());
  trace.feature_predictions(0) = trace.hint;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    FeatureBlock& block = blocks_[b];
    Eigen::VectorXd& feat = features_[b];
    block.map.EvaluateInto(x, feat);
    Eigen::VectorXd& z = trace.base_predictions[b];
    z.resize(block.grid.size());
    z(0) = trace.hint;
    for (std::size_t k = 0; k < block.experts.size(); ++k) {
      z(k + 1) = block.experts[k].Predict(feat, trace.hint).prediction;
    }
    trace.feature_predictions(b + 1) = block.aggregator.Predict(z).prediction;
  }
  trace.prediction = top_.Predict(trace.feature_predictions).prediction;
  staged_ = true;
  return trace;
}

void HierarchyForecaster::Commit(const StepTrace& trace, double label) {
  if (!staged_ || trace.step != steps_ + 1 ||
      trace.base_predictions.size() != blocks_.size()) {
    throw ProtocolError("stale or unmatched step trace");
  }
  if (!std::isfinite(label)) throw NumericError("non-finite label", trace.step);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    FeatureBlock& block = blocks_[b];
    const Eigen::VectorXd& z = trace.base_predictions[b];
    ++block.passthrough_steps;
    for (std::size_t k = 0; k < block.experts.size(); ++k) {
      block.experts[k].Commit({z(k + 1), trace.step}, label);
    }
    block.aggregator.Commit({trace.feature_predictions(b + 1), trace.step},
                            label);
  }
  top_.Commit({trace.prediction, trace.step}, label);
  last_label_ = label;
  staged_ = false;
  ++steps_;
}

int HierarchyForecaster::BaseExpertCount() const {
  int count = 0;
  for (const auto& block : blocks_) count += block.grid.size();
  return count;
}

int HierarchyForecaster::CommitTargetCount() const {
  return BaseExpertCount() + static_cast<int>(blocks_.size()) + 1;
}

}  // namespace hvawd
