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

#include "hvawd/streams.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "hvawd/errors.h"

namespace hvawd {
namespace {

using Eigen::VectorXd;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("hvawd_streams_" + std::to_string(::testing::UnitTest::GetInstance()
                                                   ->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

DriftScenario Scenario(DriftKind kind) {
  DriftScenario s;
  s.kind = kind;
  s.anchors = 5;
  s.segment_length = 10;
  s.step_size = 0.05;
  return s;
}

TEST(GenerateTest, ConstantScenarioHasZeroPathLength) {
  const GeneratedStream g = Generate(Scenario(DriftKind::kConstant), 50, 2,
                                     KernelSpec::Gaussian(2, 1.0), 1);
  EXPECT_EQ(g.records.size(), 50u);
  EXPECT_EQ(g.trace.size(), 50u);
  EXPECT_EQ(g.trace.path_length(), 0.0);
}

TEST(GenerateTest, SingleSwitchPathLengthIsOneIncrement) {
  const GeneratedStream g = Generate(Scenario(DriftKind::kPiecewiseConstant),
                                     20, 2, KernelSpec::Gaussian(2, 1.0), 2);
  const double jump = RkhsDistance(g.trace[10], g.trace[9]);
  EXPECT_GT(jump, 0.0);
  EXPECT_NEAR(g.trace.path_length(), jump, 1e-12);
}

TEST(GenerateTest, RandomWalkPathLengthMatchesGramRecomputation) {
  const KernelSpec kernel = KernelSpec::Gaussian(3, 0.8);
  const GeneratedStream g =
      Generate(Scenario(DriftKind::kRandomWalk), 200, 3, kernel, 3);
  const auto& anchors = g.trace[0].anchors();
  Eigen::MatrixXd gram(anchors.size(), anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      gram(i, j) = std::exp(-(anchors[i] - anchors[j]).squaredNorm() /
                            (2.0 * 0.8 * 0.8));
    }
  }
  double p = 0.0;
  for (std::size_t t = 1; t < g.trace.size(); ++t) {
    const VectorXd dc =
        g.trace[t].coefficients() - g.trace[t - 1].coefficients();
    p += std::sqrt(dc.dot(gram * dc));
  }
  EXPECT_NEAR(g.trace.path_length(), p, 1e-10);
}

TEST(GenerateTest, LabelsAndValuesRespectBounds) {
  DriftScenario s = Scenario(DriftKind::kRandomWalk);
  s.coefficient_scale = 3.0;
  s.label_clip = 0.8;
  const KernelSpec kernel = KernelSpec::Gaussian(2, 1.0);
  const GeneratedStream g = Generate(s, 300, 2, kernel, 4);
  for (std::size_t t = 0; t < g.records.size(); ++t) {
    const StreamRecord& r = g.records[t];
    EXPECT_EQ(r.t, static_cast<std::int64_t>(t) + 1);
    EXPECT_LE(std::abs(r.y), 0.8);
    EXPECT_LE(std::abs(g.trace[t](r.x)),
              kernel.feature_bound * RkhsNorm(g.trace[t]) + 1e-12);
    EXPECT_TRUE((r.x.array() >= -1.0).all() && (r.x.array() <= 1.0).all());
  }
}

TEST(GenerateTest, DefaultNormCapKeepsClampInactive) {
  DriftScenario s = Scenario(DriftKind::kRandomWalk);
  s.coefficient_scale = 5.0;
  s.step_size = 0.5;
  const GeneratedStream g =
      Generate(s, 200, 2, KernelSpec::Gaussian(2, 1.0), 6);
  const double cap = s.label_clip - 3.0 * s.noise;
  for (std::size_t t = 0; t < g.records.size(); ++t) {
    EXPECT_LE(RkhsNorm(g.trace[t]), cap + 1e-12);
    const double f = g.trace[t](g.records[t].x);
    EXPECT_LE(std::abs(f), cap + 1e-12);
    EXPECT_LE(std::abs(g.records[t].y - f), 3.0 * s.noise + 1e-12);
  }
  s.noise = 0.5;
  EXPECT_THROW(Generate(s, 10, 2, KernelSpec::Gaussian(2, 1.0), 6),
               InvalidArgument);
  s.max_norm = 2.0;
  EXPECT_NO_THROW(Generate(s, 10, 2, KernelSpec::Gaussian(2, 1.0), 6));
}

TEST(GenerateTest, SeedDeterminism) {
  const KernelSpec kernel = KernelSpec::Gaussian(2, 1.0);
  const auto a = Generate(Scenario(DriftKind::kRandomWalk), 40, 2, kernel, 9);
  const auto b = Generate(Scenario(DriftKind::kRandomWalk), 40, 2, kernel, 9);
  const auto c = Generate(Scenario(DriftKind::kRandomWalk), 40, 2, kernel, 10);
  bool differs = false;
  for (std::size_t t = 0; t < 40; ++t) {
    EXPECT_EQ(a.records[t].x, b.records[t].x);
    EXPECT_EQ(a.records[t].y, b.records[t].y);
    differs = differs || a.records[t].y != c.records[t].y;
  }
  EXPECT_EQ(a.trace.path_length(), b.trace.path_length());
  EXPECT_TRUE(differs);
}

TEST(GenerateTest, RejectsInvalidScenarios) {
  const KernelSpec kernel = KernelSpec::Gaussian(2, 1.0);
  DriftScenario s;
  s.anchors = 0;
  EXPECT_THROW(Generate(s, 10, 2, kernel, 1), InvalidArgument);
  s = DriftScenario{};
  s.noise = -1.0;
  EXPECT_THROW(Generate(s, 10, 2, kernel, 1), InvalidArgument);
  s = DriftScenario{};
  s.box_low = 1.0;
  EXPECT_THROW(Generate(s, 10, 2, kernel, 1), InvalidArgument);
  EXPECT_THROW(Generate(DriftScenario{}, 0, 2, kernel, 1), InvalidArgument);
  EXPECT_THROW(Generate(DriftScenario{}, 10, 3, kernel, 1), InvalidArgument);
}

TEST(IngestTest, EmptyFileGivesNoRecords) {
  TempDir dir;
  WriteText(dir / "empty.csv", "");
  const IngestedStream s = Ingest(dir / "empty.csv", {});
  EXPECT_TRUE(s.records.empty());
  EXPECT_EQ(s.label_bound, 0.0);
}

TEST(IngestTest, SmallCsv) {
  TempDir dir;
  WriteText(dir / "s.csv",
            "t,x_0,x_1,y\n1,0.5,1,0.25\n2,-1,2,-1.5\n3,0,0,0.75\n");
  const IngestedStream s = Ingest(dir / "s.csv", {});
  ASSERT_EQ(s.records.size(), 3u);
  EXPECT_EQ(s.dimension, 2);
  EXPECT_EQ(s.label_bound, 1.5);
  EXPECT_EQ(s.records[1].x(1), 2.0);
  EXPECT_FALSE(s.records[1].hint.has_value());
}

TEST(IngestTest, CsvHintColumn) {
  TempDir dir;
  WriteText(dir / "h.csv", "t,x_0,y,hint\n1,0.5,0.25,\n2,1,0.5,0.3\n");
  const IngestedStream s = Ingest(dir / "h.csv", {});
  ASSERT_EQ(s.records.size(), 2u);
  EXPECT_FALSE(s.records[0].hint.has_value());
  EXPECT_EQ(s.records[1].hint, 0.3);
}

TEST(IngestTest, MalformedRowReportsLine) {
  TempDir dir;
  WriteText(dir / "bad.csv", "t,x_0,y\n1,0.5,0.25\n2,abc,0.1\n");
  try {
    Ingest(dir / "bad.csv", {});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(IngestTest, InconsistentDimensionIsSchemaError) {
  TempDir dir;
  WriteText(dir / "d.csv", "t,x_0,y\n1,0.5,0.25\n2,0.1,0.2,0.3,0.4\n");
  EXPECT_THROW(Ingest(dir / "d.csv", {}), SchemaError);
  WriteText(dir / "d.jsonl",
            "{\"t\":1,\"x\":[1,2],\"y\":0}\n{\"t\":2,\"x\":[1],\"y\":0}\n");
  EXPECT_THROW(Ingest(dir / "d.jsonl", {StreamFormat::kJsonLines, {}}),
               SchemaError);
  WriteText(dir / "ok.csv", "t,x_0,y\n1,0.5,0.25\n");
  EXPECT_THROW(Ingest(dir / "ok.csv", {StreamFormat::kCsv, 2}), SchemaError);
}

TEST(IngestTest, NonIncreasingStepIsParseError) {
  TempDir dir;
  WriteText(dir / "t.csv", "t,x_0,y\n2,0.5,0.25\n2,0.1,0.2\n");
  EXPECT_THROW(Ingest(dir / "t.csv", {}), ParseError);
}

TEST(IngestTest, MissingFileIsInvalidArgument) {
  EXPECT_THROW(Ingest("/nonexistent/stream.csv", {}), InvalidArgument);
}

TEST(RoundTripTest, WriteThenIngestIsBitwise) {
  TempDir dir;
  GeneratedStream g = Generate(Scenario(DriftKind::kRandomWalk), 64, 3,
                               KernelSpec::Gaussian(3, 1.0), 5);
  g.records[3].hint = 1.0 / 3.0;
  for (const StreamFormat format : {StreamFormat::kCsv, StreamFormat::kJsonLines}) {
    const auto path = dir / (format == StreamFormat::kCsv ? "r.csv" : "r.jsonl");
    WriteStream(g.records, path, format);
    const IngestedStream s = Ingest(path, {format, 3});
    ASSERT_EQ(s.records.size(), g.records.size());
    for (std::size_t t = 0; t < s.records.size(); ++t) {
      EXPECT_EQ(s.records[t].t, g.records[t].t);
      EXPECT_EQ(s.records[t].x, g.records[t].x);
      EXPECT_EQ(s.records[t].y, g.records[t].y);
      EXPECT_EQ(s.records[t].hint, g.records[t].hint);
    }
  }
}

TEST(FormatDoubleTest, SeventeenDigits) {
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(FormatDouble(2.0), "2");
}

}  // namespace
}  // namespace hvawd
