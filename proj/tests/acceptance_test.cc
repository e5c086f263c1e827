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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hvawd/config.h"
#include "hvawd/hierarchy.h"
#include "hvawd/runner.h"
#include "hvawd/streams.h"
#include "hvawd/verify.h"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

constexpr double kNoTimeLimit = 0.0;

// A suite passes the criterion when every check passes, within `budget`
// seconds when one is given. The detail lists each check's observed value.
Outcome SuiteCriterion(const hvawd::verify::SuiteReport& report,
                       double budget = kNoTimeLimit) {
  std::ostringstream detail;
  for (const auto& check : report.checks) {
    detail << check.name << " = " << Fmt("%.3g", check.observed) << " (tol "
           << Fmt("%.2g", check.tolerance) << "); ";
  }
  const bool in_time = budget == kNoTimeLimit || report.seconds < budget;
  detail << Fmt("%.2fs", report.seconds);
  if (budget != kNoTimeLimit) detail << Fmt(" (limit %.0fs)", budget);
  return {report.passed() && in_time, detail.str()};
}

hvawd::RunConfig SweepBase() {
  hvawd::RunConfig c;
  c.horizon = 256;
  c.dimension = 2;
  c.kernel = hvawd::KernelSpec::Gaussian(2, 1.0);
  c.scenario = hvawd::DriftScenario{};
  c.scenario->step_size = 0.01;
  c.hint.clip = c.scenario->label_clip;
  c.seed = 101;
  c.evaluate_bounds = false;
  return c;
}

Outcome Sublinearity() {
  const auto start = Clock::now();
  const std::vector<std::int64_t> horizons = {256, 512, 1024, 2048};
  constexpr int kSeeds = 4;
  const auto constant = hvawd::Sweep(SweepBase(), horizons,
                                     hvawd::SweepRegime::kConstant, kSeeds);
  const auto drift = hvawd::Sweep(SweepBase(), horizons,
                                  hvawd::SweepRegime::kSqrtDrift, kSeeds);
  std::vector<double> ts, paths;
  for (const auto& row : drift.rows) {
    ts.push_back(static_cast<double>(row.horizon));
    paths.push_back(row.mean_path_length);
  }
  const double path_slope = hvawd::LogLogSlope(ts, paths);
  const double elapsed = Seconds(start);
  // NaN slopes (non-positive mean regret) compare false and fail.
  const bool ok = constant.regret_slope <= 0.6 && drift.regret_slope <= 0.85 &&
                  elapsed < 15 * 60;
  return {ok, Fmt("constant slope %.3f (<= 0.6), sqrt-drift slope %.3f "
                  "(<= 0.85, path-length slope %.3f), ",
                  constant.regret_slope, drift.regret_slope, path_slope) +
                  Fmt("%.1fs (limit 900s)", elapsed)};
}

// Per-step wall time of one predict/commit pass over `stream`.
double TimedPass(const hvawd::GeneratedStream& stream, std::int64_t horizon,
                 const hvawd::KernelSpec& kernel) {
  hvawd::HierarchyOptions options;
  options.horizon = horizon;
  options.kernel = kernel;
  options.master_seed = 7;
  hvawd::HierarchyForecaster forecaster(options);
  const auto start = Clock::now();
  for (const auto& rec : stream.records) {
    forecaster.Commit(forecaster.Predict(rec.x), rec.y);
  }
  return Seconds(start) / static_cast<double>(horizon);
}

// Both horizons are timed in interleaved rounds after a warm-up pass, and each
// keeps its fastest pass, so frequency drift and cache state hit both alike.
Outcome ComplexityScaling() {
  constexpr std::int64_t kSmall = 1024;
  constexpr std::int64_t kLarge = 4096;
  constexpr int kRounds = 9;
  hvawd::DriftScenario scenario;
  scenario.kind = hvawd::DriftKind::kRandomWalk;
  const hvawd::KernelSpec kernel = hvawd::KernelSpec::Gaussian(2, 1.0);
  const auto small_stream = hvawd::Generate(scenario, kSmall, 2, kernel, 7);
  const auto large_stream = hvawd::Generate(scenario, kLarge, 2, kernel, 7);
  TimedPass(small_stream, kSmall, kernel);
  double small = std::numeric_limits<double>::infinity();
  double large = small;
  for (int r = 0; r < kRounds; ++r) {
    small = std::min(small, TimedPass(small_stream, kSmall, kernel));
    large = std::min(large, TimedPass(large_stream, kLarge, kernel));
  }
  const double ratio = large / small;
  return {ratio >= 3.0 && ratio <= 10.0,
          Fmt("per-step %.3es at T=1024, %.3es at T=4096, ratio %.2f "
              "(within [3, 10])",
              small, large, ratio)};
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[entry.path().filename().string()] = s.str();
  }
  return files;
}

Outcome Determinism() {
  const fs::path dir = fs::temp_directory_path() / "hvawd_acceptance_det";
  fs::remove_all(dir);
  hvawd::RunConfig config = SweepBase();
  config.horizon = 1024;
  config.scenario->kind = hvawd::DriftKind::kRandomWalk;
  config.evaluate_bounds = true;
  config.output_dir = dir;
  hvawd::Run(config);
  const auto first = Snapshot(dir);
  hvawd::Run(config);
  const auto second = Snapshot(dir);
  fs::remove_all(dir);
  std::size_t bytes = 0;
  for (const auto& [name, data] : first) bytes += data.size();
  return {!first.empty() && first == second,
          Fmt("%.0f files, %.0f bytes compared", static_cast<double>(first.size()),
              static_cast<double>(bytes))};
}

}  // namespace

int main() {
  namespace v = hvawd::verify;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1 woodbury correctness",
       [] { return SuiteCriterion(v::WoodburyOracle(200, 8), 5.0); }},
      {"AC2 ftrl oracle equivalence",
       [] { return SuiteCriterion(v::FtrlOracle(50, 100, 6), 60.0); }},
      {"AC3 reduction identity",
       [] { return SuiteCriterion(v::ReductionIdentity(20)); }},
      {"AC4 dynamic bound dominance",
       [] { return SuiteCriterion(v::BoundDominance(200, 200, 6), 180.0); }},
      {"AC5 static bound",
       [] { return SuiteCriterion(v::StaticBound(100)); }},
      {"AC6 feature-map statistics",
       [] {
         v::UnbiasednessOptions options;
         options.lift_maps = 200;
         options.lift_features = {8, 32, 128};
         return SuiteCriterion(v::Unbiasedness(options), 120.0);
       }},
      {"AC7 grid exactness",
       [] { return SuiteCriterion(v::GridExactness()); }},
      {"AC8 hierarchy sublinearity", Sublinearity},
      {"AC9 complexity scaling", ComplexityScaling},
      {"AC10 determinism", Determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.passed ? 0 : 1;
    std::printf("[%s] %s: %s\n", outcome.passed ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
