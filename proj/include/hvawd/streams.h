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

#ifndef HVAWD_STREAMS_H_
#define HVAWD_STREAMS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvawd/bounds.h"
#include "hvawd/features.h"

namespace hvawd {

struct StreamRecord {
  std::int64_t t = 0;  // 1-based, strictly increasing
  Eigen::VectorXd x;
  double y = 0.0;
  std::optional<double> hint;
};

enum class DriftKind { kConstant, kPiecewiseConstant, kRandomWalk };

// Comparator process f_t = sum_i c_{t,i} k(., z_i) over anchors z_i drawn
// once, and labels y_t = clamp(f_t(x_t) + noise, -Y, Y) where the noise is
// a normal with sd `noise` truncated at three sd.
//
// Coefficients are shrunk whenever |f_t|_H would exceed `max_norm`. The
// default cap (Y - 3 noise) / sup_x sqrt(k(x, x)) keeps |f_t(x)| + |noise|
// within Y, so the clamp never binds and f_t stays the Bayes predictor.
struct DriftScenario {
  DriftKind kind = DriftKind::kConstant;
  int anchors = 8;
  // Steps per segment for kPiecewiseConstant; coefficients are redrawn at
  // each segment start.
  std::int64_t segment_length = 100;
  // Per-coordinate sd of the coefficient increment for kRandomWalk.
  double step_size = 0.01;
  // Coefficients start as N(0, scale^2 / anchors).
  double coefficient_scale = 1.0;
  double noise = 0.1;
  double label_clip = 1.0;  // Y
  std::optional<double> max_norm;
  // Inputs are uniform on [box_low, box_high]^d (gaussian kernels) or on the
  // dictionary points (finite-dictionary kernels).
  double box_low = -1.0;
  double box_high = 1.0;

  void Validate() const;
};

struct GeneratedStream {
  std::vector<StreamRecord> records;
  ComparatorTrace trace;
};

GeneratedStream Generate(const DriftScenario& scenario, std::int64_t horizon,
                         int dimension, const KernelSpec& kernel,
                         std::uint64_t seed);

enum class StreamFormat { kCsv, kJsonLines };

struct IngestSchema {
  StreamFormat format = StreamFormat::kCsv;
  // Expected feature dimension; inferred from the first row when empty.
  std::optional<int> dimension;
};

struct IngestedStream {
  std::vector<StreamRecord> records;
  int dimension = 0;
  double label_bound = 0.0;  // max |y|
};

// CSV: header `t,x_0,...,x_{d-1},y[,hint]`, one row per step, an empty hint
// cell meaning "no hint". JSON lines: {"t":..,"x":[..],"y":..[,"hint":..]}.
// Malformed rows raise ParseError with the line number, rows whose
// dimension disagrees raise SchemaError.
IngestedStream Ingest(const std::filesystem::path& path,
                      const IngestSchema& schema);

// Writes with 17 significant digits so that Ingest reproduces every double.
void WriteStream(const std::vector<StreamRecord>& records,
                 const std::filesystem::path& path, StreamFormat format);

// %.17g.
std::string FormatDouble(double value);

}  // namespace hvawd

#endif  // HVAWD_STREAMS_H_
