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

#include "hvawd/runner.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hvawd/config.h"
#include "hvawd/errors.h"
#include "hvawd/streams.h"
#include "json.hpp"

namespace hvawd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hvawd_runner_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  json BaseDoc(std::int64_t horizon) const {
    return json{{"horizon", horizon},
                {"dimension", 2},
                {"kernel", {{"kind", "gaussian-rff"}, {"bandwidth", 1.0}}},
                {"scenario", {{"kind", "constant"}, {"noise", 0.1}}},
                {"seed", 17},
                {"output_dir", (dir_ / "out").string()}};
  }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(RunnerTest, SingleStepZeroHintRegret) {
  json doc = BaseDoc(1);
  doc["hint"] = {{"policy", "zero"}};
  const RunConfig config = ParseRunConfig(doc);
  const RunSummary s = hvawd::Run(config, false);
  const GeneratedStream g = Generate(*config.scenario, 1, 2, config.kernel,
                                     config.seed);
  const double y = g.records[0].y;
  const double f = g.trace[0](g.records[0].x);
  EXPECT_EQ(s.cumulative_loss, 0.5 * y * y);
  EXPECT_NEAR(*s.dynamic_regret, 0.5 * y * y - 0.5 * (f - y) * (f - y), 1e-15);
}

TEST_F(RunnerTest, ConstantRegimeRegretIsPositiveAndSublinear) {
  const RunSummary s256 = hvawd::Run(ParseRunConfig(BaseDoc(256)), false);
  const RunSummary s512 = hvawd::Run(ParseRunConfig(BaseDoc(512)), false);
  EXPECT_GT(*s512.dynamic_regret, 0.0);
  EXPECT_LT(*s512.dynamic_regret / 512.0, *s256.dynamic_regret / 256.0);
}

TEST_F(RunnerTest, SummaryAgreesWithLedgerAndCsv) {
  const RunConfig config = ParseRunConfig(BaseDoc(128));
  const RunSummary s = hvawd::Run(config, true);
  EXPECT_NEAR(*s.dynamic_regret, s.cumulative_loss - *s.comparator_loss, 1e-10);

  std::ifstream csv(config.output_dir / "steps.csv");
  std::string header, line, last;
  std::getline(csv, header);
  EXPECT_EQ(header,
            "t,prediction,label,hint,zeta_m0,zeta_m1,zeta_m2,zeta_m4,zeta_m8,"
            "zeta_m16,loss,cumulative_loss,comparator,cumulative_regret");
  int rows = 0;
  double loss_sum = 0.0;
  while (std::getline(csv, line)) {
    ++rows;
    last = line;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 14u);
    loss_sum += std::stod(cells[10]);
  }
  EXPECT_EQ(rows, 128);
  EXPECT_NEAR(loss_sum, s.cumulative_loss, 1e-10);
  const double last_regret = std::stod(last.substr(last.rfind(',') + 1));
  EXPECT_NEAR(last_regret, *s.dynamic_regret, 1e-10);

  const json summary = json::parse(Slurp(config.output_dir / "summary.json"));
  EXPECT_NEAR(summary["dynamic_regret"].get<double>(), *s.dynamic_regret, 1e-12);
  ASSERT_TRUE(summary["bounds"].is_object());
  EXPECT_EQ(summary["bounds"]["blocks"].size(), 5u);
  EXPECT_EQ(summary["feature_experts"].size(), 6u);
  EXPECT_LE(summary["bounds"]["top_meta_regret"].get<double>(),
            summary["bounds"]["top_static_bound"].get<double>());
  for (const auto& entry : fs::directory_iterator(config.output_dir)) {
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
}

TEST_F(RunnerTest, RepeatedRunsAreBytewiseIdentical) {
  json doc = BaseDoc(200);
  doc["scenario"] = {{"kind", "coefficient-random-walk"}, {"step_size", 0.02}};
  const RunConfig config = ParseRunConfig(doc);
  hvawd::Run(config, true);
  const std::string csv = Slurp(config.output_dir / "steps.csv");
  const std::string summary = Slurp(config.output_dir / "summary.json");
  hvawd::Run(config, true);
  EXPECT_EQ(Slurp(config.output_dir / "steps.csv"), csv);
  EXPECT_EQ(Slurp(config.output_dir / "summary.json"), summary);
}

TEST_F(RunnerTest, IngestedStreamRunsWithoutComparator) {
  std::ofstream(dir_ / "s.csv") << "t,x_0,x_1,y,hint\n"
                                   "1,0.1,0.2,0.5,\n"
                                   "2,0.3,-0.2,-0.5,0.1\n"
                                   "3,-0.4,0.6,0.2,0.4\n";
  json doc = BaseDoc(3);
  doc.erase("scenario");
  doc["input"] = {{"path", "s.csv"}, {"format", "csv"}};
  doc["hint"] = {{"policy", "external"}, {"clip", 1.0}};
  const RunConfig config = ParseRunConfig(doc, dir_);
  const RunSummary s = hvawd::Run(config, false);
  EXPECT_FALSE(s.dynamic_regret.has_value());
  EXPECT_FALSE(s.bounds.has_value());
  EXPECT_EQ(s.label_bound, 0.5);
  doc["horizon"] = 4;
  EXPECT_THROW(hvawd::Run(ParseRunConfig(doc, dir_), false), InvalidArgument);
}

TEST_F(RunnerTest, NumericFailureCarriesStep) {
  std::ofstream(dir_ / "big.csv") << "t,x_0,x_1,y\n"
                                     "1,0.1,0.2,1e300\n"
                                     "2,0.3,-0.2,1e300\n"
                                     "3,-0.4,0.6,1e300\n";
  json doc = BaseDoc(3);
  doc.erase("scenario");
  doc["input"] = {{"path", (dir_ / "big.csv").string()}};
  doc["hint"] = {{"policy", "zero"}};
  try {
    hvawd::Run(ParseRunConfig(doc), true);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_GE(e.step(), 1);
    EXPECT_LE(e.step(), 3);
  }
  EXPECT_FALSE(fs::exists(dir_ / "out" / "steps.csv"));
}

TEST_F(RunnerTest, ConfigValidation) {
  json doc = BaseDoc(10);
  EXPECT_NO_THROW(ParseRunConfig(doc));
  json bad = doc;
  bad.erase("seed");
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["horizon"] = 0;
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["colour"] = "blue";
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["input"] = {{"path", "x.csv"}};
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad.erase("scenario");
  bad["input"] = {{"path", (dir_ / "missing.csv").string()}};
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["kernel"] = {{"kind", "laplace"}};
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["scenario"]["kind"] = "zigzag";
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["hint"] = {{"policy", "external"}};
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
  bad = doc;
  bad["grid_base"] = 1.0;
  EXPECT_THROW(ParseRunConfig(bad), InvalidArgument);
}

TEST_F(RunnerTest, HintClipDefaultsToLabelBound) {
  json doc = BaseDoc(10);
  doc["scenario"]["label_clip"] = 2.5;
  EXPECT_EQ(ParseRunConfig(doc).hint.clip, 2.5);
  doc["hint"] = {{"clip", 0.5}};
  EXPECT_EQ(ParseRunConfig(doc).hint.clip, 0.5);
}

TEST_F(RunnerTest, ConfigJsonRoundTrip) {
  json doc = BaseDoc(10);
  doc["envelope"] = {{"c1", 2.0}, {"c2", 3.0}, {"c3", 4.0}};
  doc["hint"] = {{"policy", "last-label"}, {"clip", 0.7}};
  const RunConfig a = ParseRunConfig(doc);
  const RunConfig b = ParseRunConfig(json::parse(RunConfigToJson(a).dump()));
  EXPECT_EQ(RunConfigToJson(a).dump(), RunConfigToJson(b).dump());
  EXPECT_TRUE(a.kernel == b.kernel);
}

TEST_F(RunnerTest, DictionaryKernelConfig) {
  json doc = BaseDoc(20);
  doc["dimension"] = 1;
  doc["kernel"] = {{"kind", "finite-dictionary"},
                   {"points", {{0.0}, {1.0}}},
                   {"table", {{1, 1, 1, 1}, {1, 1, 1, -1}}}};
  const RunSummary s = hvawd::Run(ParseRunConfig(doc), false);
  EXPECT_TRUE(std::isfinite(s.cumulative_loss));
}

TEST_F(RunnerTest, OutputDirectoryOverride) {
  std::ofstream(dir_ / "c.json") << BaseDoc(5).dump();
  ::setenv(kOutputDirEnv, (dir_ / "override").string().c_str(), 1);
  const RunConfig config = LoadRunConfig(dir_ / "c.json");
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(config.output_dir, dir_ / "override");
}

TEST(SweepTest, NeedsThreeHorizons) {
  RunConfig c;
  c.horizon = 8;
  c.dimension = 1;
  c.kernel = KernelSpec::Gaussian(1, 1.0);
  c.scenario = DriftScenario{};
  EXPECT_THROW(Sweep(c, {8, 16}, SweepRegime::kConstant), InvalidArgument);
  const SweepReport r = Sweep(c, {8, 16, 32}, SweepRegime::kSqrtDrift);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_GT(r.rows[2].mean_path_length, r.rows[0].mean_path_length);
  EXPECT_THROW(ParseSweepRegime("bogus"), InvalidArgument);
}

TEST(LogLogSlopeTest, RecoversPowerLaw) {
  EXPECT_NEAR(LogLogSlope({2, 4, 8, 16}, {3 * std::pow(2, 0.7),
                                          3 * std::pow(4, 0.7),
                                          3 * std::pow(8, 0.7),
                                          3 * std::pow(16, 0.7)}),
              0.7, 1e-12);
  EXPECT_TRUE(std::isnan(LogLogSlope({1, 2, 3}, {1, -1, 2})));
  EXPECT_THROW(LogLogSlope({1}, {1}), InvalidArgument);
}

}  // namespace
}  // namespace hvawd
