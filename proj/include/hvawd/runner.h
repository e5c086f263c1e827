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

#ifndef HVAWD_RUNNER_H_
#define HVAWD_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hvawd/bounds.h"
#include "hvawd/config.h"
#include "json.hpp"

namespace hvawd {

struct ExpertRegret {
  std::string name;  // "m=4" or "m=4,gamma=0.888..."
  double loss = 0.0;
  // loss - comparator loss; NaN without a comparator trace.
  double regret = 0.0;
};

struct RunSummary {
  std::int64_t horizon = 0;
  double cumulative_loss = 0.0;
  // Set only when the stream carries a comparator trace.
  std::optional<double> comparator_loss;
  std::optional<double> dynamic_regret;
  std::optional<double> path_length;
  std::optional<double> norm_cap;
  double delta_sq = 0.0;
  double max_delta_sq = 0.0;
  double label_bound = 0.0;
  std::vector<ExpertRegret> feature_experts;  // level-3 inputs
  std::vector<ExpertRegret> base_experts;     // every (m, gamma) slot
  std::optional<BoundReport> bounds;
  // Spectral resets summed over every forecaster in the hierarchy.
  std::int64_t conditioning_resets = 0;
  // Wall time of the predict/commit loop only. Kept out of the summary file
  // so that repeated runs write identical bytes.
  double seconds_per_step = 0.0;
};

// Runs the hierarchy over the configured stream. With `write_outputs`,
// writes steps.csv and summary.json into config.output_dir; each file is
// written to a temporary name and renamed once complete. Numeric failures
// surface as NumericError carrying the 1-based step.
RunSummary Run(const RunConfig& config, bool write_outputs = true);

nlohmann::ordered_json SummaryToJson(const RunSummary& summary);

// Drift regimes for sweeps: the random-walk step is rescaled with T so that
// the path length grows like T^exponent.
enum class SweepRegime { kConstant, kSqrtDrift, kLinearDrift };

SweepRegime ParseSweepRegime(const std::string& name);
const char* SweepRegimeName(SweepRegime regime);

struct SweepRow {
  std::int64_t horizon = 0;
  double mean_regret = 0.0;
  double mean_path_length = 0.0;
  double seconds_per_step = 0.0;
  std::vector<double> regrets;  // one per seed
};

struct SweepReport {
  SweepRegime regime = SweepRegime::kConstant;
  std::vector<SweepRow> rows;
  // Least-squares slopes of log(mean regret) and log(seconds per step)
  // against log T. The regret slope is NaN if some mean regret is <= 0.
  double regret_slope = 0.0;
  double time_slope = 0.0;
};

// Runs `base` at each horizon for `seeds` consecutive seeds starting at
// base.seed. The scenario in `base` supplies everything but the kind and,
// for the drift regimes, the step size at the first horizon. Needs at least
// three horizons and a synthetic scenario.
SweepReport Sweep(const RunConfig& base, const std::vector<std::int64_t>& horizons,
                  SweepRegime regime, int seeds = 1);

nlohmann::ordered_json SweepToJson(const SweepReport& report);

// Least-squares slope of log y against log x. Requires >= 2 points.
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

// Writes `contents` to `path` through a temporary file and a rename.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& contents);

}  // namespace hvawd

#endif  // HVAWD_RUNNER_H_
