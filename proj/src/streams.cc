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

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "hvawd/errors.h"
#include "hvawd/rng.h"
#include "json.hpp"

namespace hvawd {
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double ParseNumber(const std::string& text, std::int64_t line) {
  if (text.empty()) throw ParseError("empty numeric field", line);
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end != begin + text.size() || errno == ERANGE || !std::isfinite(value)) {
    throw ParseError("cannot parse '" + text + "' as a finite number", line);
  }
  return value;
}

std::int64_t ParseStep(const std::string& text, std::int64_t line) {
  const double value = ParseNumber(text, line);
  if (value != std::floor(value) || value < 1 || value > 9.0e15) {
    throw ParseError("step index must be a positive integer", line);
  }
  return static_cast<std::int64_t>(value);
}

void AppendRecord(IngestedStream& stream, StreamRecord record,
                  std::int64_t line) {
  if (!stream.records.empty() && record.t <= stream.records.back().t) {
    throw ParseError("step indices must increase strictly", line);
  }
  stream.label_bound = std::max(stream.label_bound, std::abs(record.y));
  stream.records.push_back(std::move(record));
}

void CheckDimension(IngestedStream& stream, const IngestSchema& schema,
                    int dimension, std::int64_t line) {
  if (dimension < 1) throw SchemaError("line " + std::to_string(line) +
                                       ": rows need at least one feature");
  if (stream.dimension == 0) {
    if (schema.dimension && *schema.dimension != dimension) {
      throw SchemaError("line " + std::to_string(line) + ": expected " +
                        std::to_string(*schema.dimension) + " features, got " +
                        std::to_string(dimension));
    }
    stream.dimension = dimension;
  } else if (stream.dimension != dimension) {
    throw SchemaError("line " + std::to_string(line) + ": expected " +
                      std::to_string(stream.dimension) + " features, got " +
                      std::to_string(dimension));
  }
}

IngestedStream IngestCsv(std::istream& in, const IngestSchema& schema) {
  IngestedStream stream;
  std::string line;
  std::int64_t line_no = 0;
  int dimension = 0;
  bool has_hint_column = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsv(line);
    if (!have_header) {
      const auto n = static_cast<int>(fields.size());
      has_hint_column = n > 0 && fields.back() == "hint";
      dimension = n - 2 - (has_hint_column ? 1 : 0);
      if (dimension < 1 || fields[0] != "t" ||
          fields[1 + dimension] != "y") {
        throw ParseError("header must be t,x_0,...,x_{d-1},y[,hint]", line_no);
      }
      for (int k = 0; k < dimension; ++k) {
        if (fields[1 + k] != "x_" + std::to_string(k)) {
          throw ParseError("unexpected header column '" + fields[1 + k] + "'",
                           line_no);
        }
      }
      CheckDimension(stream, schema, dimension, line_no);
      have_header = true;
      continue;
    }
    const int expected = dimension + 2 + (has_hint_column ? 1 : 0);
    if (static_cast<int>(fields.size()) != expected) {
      const int row_dimension =
          static_cast<int>(fields.size()) - 2 - (has_hint_column ? 1 : 0);
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(dimension) + " features, got " +
                        std::to_string(row_dimension));
    }
    StreamRecord record;
    record.t = ParseStep(fields[0], line_no);
    record.x.resize(dimension);
    for (int k = 0; k < dimension; ++k) {
      record.x(k) = ParseNumber(fields[1 + k], line_no);
    }
    record.y = ParseNumber(fields[1 + dimension], line_no);
    if (has_hint_column && !fields.back().empty()) {
      record.hint = ParseNumber(fields.back(), line_no);
    }
    AppendRecord(stream, std::move(record), line_no);
  }
  return stream;
}

IngestedStream IngestJsonLines(std::istream& in, const IngestSchema& schema) {
  IngestedStream stream;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    StreamRecord record;
    try {
      const auto& t = row.at("t");
      if (!t.is_number_integer() || t.get<std::int64_t>() < 1) {
        throw ParseError("step index must be a positive integer", line_no);
      }
      record.t = t.get<std::int64_t>();
      const auto& x = row.at("x");
      if (!x.is_array()) throw ParseError("x must be an array", line_no);
      CheckDimension(stream, schema, static_cast<int>(x.size()), line_no);
      record.x.resize(static_cast<Eigen::Index>(x.size()));
      for (std::size_t k = 0; k < x.size(); ++k) {
        record.x(static_cast<Eigen::Index>(k)) = x[k].get<double>();
      }
      record.y = row.at("y").get<double>();
      if (row.contains("hint") && !row["hint"].is_null()) {
        record.hint = row["hint"].get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad field: ") + e.what(), line_no);
    }
    AppendRecord(stream, std::move(record), line_no);
  }
  return stream;
}

double TruncatedNormal(Rng& rng, double sd) {
  if (sd == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, sd);
  for (;;) {
    const double v = normal(rng);
    if (std::abs(v) <= 3.0 * sd) return v;
  }
}

}  // namespace

void DriftScenario::Validate() const {
  if (anchors < 1) throw InvalidArgument("scenario needs at least one anchor");
  if (kind == DriftKind::kPiecewiseConstant && segment_length < 1) {
    throw InvalidArgument("segment length must be >= 1");
  }
  if (!(step_size >= 0.0)) throw InvalidArgument("step size must be >= 0");
  if (!(coefficient_scale >= 0.0)) {
    throw InvalidArgument("coefficient scale must be >= 0");
  }
  if (!(noise >= 0.0)) throw InvalidArgument("noise level must be >= 0");
  if (!(label_clip > 0.0)) throw InvalidArgument("label clip must be > 0");
  if (!(box_low < box_high)) throw InvalidArgument("input box is empty");
  if (max_norm && !(*max_norm > 0.0)) {
    throw InvalidArgument("max_norm must be > 0");
  }
}

GeneratedStream Generate(const DriftScenario& scenario, std::int64_t horizon,
                         int dimension, const KernelSpec& kernel,
                         std::uint64_t seed) {
  scenario.Validate();
  kernel.Validate();
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  if (dimension != kernel.dimension) {
    throw InvalidArgument("scenario dimension does not match the kernel");
  }
  Rng rng(StableHash(seed, "stream", 0));
  const bool dictionary = kernel.kind == KernelKind::kFiniteDictionary;
  std::uniform_real_distribution<double> box(scenario.box_low,
                                             scenario.box_high);
  std::uniform_int_distribution<std::size_t> pick(
      0, dictionary ? kernel.points.size() - 1 : 0);
  const auto draw_input = [&]() -> Eigen::VectorXd {
    if (dictionary) return kernel.points[pick(rng)];
    Eigen::VectorXd x(dimension);
    for (int k = 0; k < dimension; ++k) x(k) = box(rng);
    return x;
  };

  std::vector<Eigen::VectorXd> anchors;
  for (int i = 0; i < scenario.anchors; ++i) anchors.push_back(draw_input());
  std::normal_distribution<double> normal(0.0, 1.0);
  const double init_sd = scenario.coefficient_scale /
                         std::sqrt(static_cast<double>(scenario.anchors));
  const auto draw_coefficients = [&] {
    Eigen::VectorXd c(scenario.anchors);
    for (int i = 0; i < scenario.anchors; ++i) c(i) = init_sd * normal(rng);
    return c;
  };

  const Eigen::MatrixXd gram = GramMatrix(kernel, anchors);
  double norm_cap = 0.0;
  if (scenario.max_norm) {
    norm_cap = *scenario.max_norm;
  } else {
    double diag = 0.0;
    if (dictionary) {
      for (const auto& p : kernel.points) diag = std::max(diag, Kernel(kernel, p, p));
    } else {
      diag = 1.0;
    }
    norm_cap = (scenario.label_clip - 3.0 * scenario.noise) / std::sqrt(diag);
    if (!(norm_cap > 0.0)) {
      throw InvalidArgument(
          "noise leaves no room under the label clip; set max_norm explicitly");
    }
  }
  const auto cap = [&](Eigen::VectorXd& c) {
    const double norm = std::sqrt(std::max(0.0, c.dot(gram * c)));
    if (norm > norm_cap) c *= norm_cap / norm;
  };

  GeneratedStream out;
  out.records.reserve(static_cast<std::size_t>(horizon));
  std::vector<RkhsFunction> functions;
  functions.reserve(static_cast<std::size_t>(horizon));
  Eigen::VectorXd coefficients = draw_coefficients();
  cap(coefficients);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (t > 1) {
      if (scenario.kind == DriftKind::kPiecewiseConstant &&
          (t - 1) % scenario.segment_length == 0) {
        coefficients = draw_coefficients();
        cap(coefficients);
      } else if (scenario.kind == DriftKind::kRandomWalk) {
        for (int i = 0; i < scenario.anchors; ++i) {
          coefficients(i) += scenario.step_size * normal(rng);
        }
        cap(coefficients);
      }
    }
    functions.emplace_back(kernel, anchors, coefficients);
    StreamRecord record;
    record.t = t;
    record.x = draw_input();
    const double signal = functions.back()(record.x);
    record.y = std::clamp(signal + TruncatedNormal(rng, scenario.noise),
                          -scenario.label_clip, scenario.label_clip);
    out.records.push_back(std::move(record));
  }
  out.trace = ComparatorTrace(std::move(functions));
  return out;
}

IngestedStream Ingest(const std::filesystem::path& path,
                      const IngestSchema& schema) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open stream file " + path.string());
  return schema.format == StreamFormat::kCsv ? IngestCsv(in, schema)
                                             : IngestJsonLines(in, schema);
}

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void WriteStream(const std::vector<StreamRecord>& records,
                 const std::filesystem::path& path, StreamFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write stream file " + path.string());
  const bool any_hint = std::any_of(records.begin(), records.end(),
                                    [](const auto& r) { return r.hint; });
  if (format == StreamFormat::kCsv) {
    const Eigen::Index d = records.empty() ? 0 : records[0].x.size();
    if (d > 0) {
      out << "t";
      for (Eigen::Index k = 0; k < d; ++k) out << ",x_" << k;
      out << ",y" << (any_hint ? ",hint" : "") << '\n';
    }
    for (const auto& r : records) {
      out << r.t;
      for (Eigen::Index k = 0; k < r.x.size(); ++k) {
        out << ',' << FormatDouble(r.x(k));
      }
      out << ',' << FormatDouble(r.y);
      if (any_hint) out << ',' << (r.hint ? FormatDouble(*r.hint) : "");
      out << '\n';
    }
  } else {
    for (const auto& r : records) {
      out << "{\"t\":" << r.t << ",\"x\":[";
      for (Eigen::Index k = 0; k < r.x.size(); ++k) {
        out << (k ? "," : "") << FormatDouble(r.x(k));
      }
      out << "],\"y\":" << FormatDouble(r.y);
      if (r.hint) out << ",\"hint\":" << FormatDouble(*r.hint);
      out << "}\n";
    }
  }
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

}  // namespace hvawd
