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

// Exit-code contract of the command-line tool.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(HVAWD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hvawd_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path WriteConfig(const nlohmann::json& doc) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << doc.dump();
    return p;
  }

  nlohmann::json Doc() const {
    return {{"horizon", 32},
            {"dimension", 2},
            {"scenario", {{"kind", "constant"}}},
            {"seed", 1},
            {"output_dir", (dir_ / "out").string()}};
  }

  fs::path dir_;
};

TEST_F(CliTest, RunSucceedsAndWritesOutputs) {
  EXPECT_EQ(RunCli("run --config " + WriteConfig(Doc()).string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "steps.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.json"));
}

TEST_F(CliTest, InvalidConfigExitsTwo) {
  nlohmann::json doc = Doc();
  doc.erase("seed");
  EXPECT_EQ(RunCli("run --config " + WriteConfig(doc).string()), 2);
  EXPECT_EQ(RunCli("run --config " + (dir_ / "nope.json").string()), 2);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(RunCli("run --config " + (dir_ / "broken.json").string()), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, NumericFailureExitsThree) {
  std::ofstream(dir_ / "big.csv") << "t,x_0,x_1,y\n1,0,0,1e300\n2,0,0,1e300\n"
                                     "3,0,0,1e300\n";
  nlohmann::json doc = Doc();
  doc["horizon"] = 3;
  doc.erase("scenario");
  doc["input"] = {{"path", "big.csv"}};
  doc["hint"] = {{"policy", "zero"}};
  EXPECT_EQ(RunCli("run --config " + WriteConfig(doc).string()), 3);
}

TEST_F(CliTest, VerifyExitCodes) {
  EXPECT_EQ(RunCli("verify --suite bogus"), 2);
  EXPECT_EQ(RunCli("verify --suite grid-exactness --report " +
                   (dir_ / "r.json").string()),
            0);
  const auto report =
      nlohmann::json::parse(std::ifstream(dir_ / "r.json"));
  ASSERT_TRUE(report.is_array() || report.is_object());
}

TEST_F(CliTest, SweepNeedsThreeHorizons) {
  const std::string cfg = WriteConfig(Doc()).string();
  EXPECT_EQ(RunCli("sweep --config " + cfg +
                   " --horizons 16,32 --regime constant"),
            2);
  EXPECT_EQ(RunCli("sweep --config " + cfg +
                   " --horizons 16,32,64 --regime nonsense"),
            2);
  EXPECT_EQ(RunCli("sweep --config " + cfg +
                   " --horizons 16,32,64 --regime linear-drift"),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "sweep_linear-drift.json"));
}

TEST_F(CliTest, MissingSubcommandExitsTwo) { EXPECT_EQ(RunCli(""), 2); }

}  // namespace
