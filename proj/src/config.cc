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

#include "hvawd/config.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include "hvawd/errors.h"

namespace hvawd {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T Get(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) {
    throw InvalidArgument("missing '" + key + "' in " + where);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("'" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T GetOr(const json& obj, const std::string& key, T fallback,
        const std::string& where) {
  return obj.contains(key) ? Get<T>(obj, key, where) : fallback;
}

Eigen::VectorXd ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

KernelSpec ParseKernel(const json& obj, int dimension) {
  const std::string where = "kernel";
  const auto kind = Get<std::string>(obj, "kind", where);
  if (kind == "gaussian-rff") {
    RejectUnknownKeys(obj, {"kind", "bandwidth"}, where);
    return KernelSpec::Gaussian(dimension,
                                GetOr<double>(obj, "bandwidth", 1.0, where));
  }
  if (kind == "finite-dictionary") {
    RejectUnknownKeys(obj, {"kind", "points", "table"}, where);
    const auto points = Get<std::vector<std::vector<double>>>(obj, "points", where);
    const auto rows = Get<std::vector<std::vector<double>>>(obj, "table", where);
    std::vector<Eigen::VectorXd> pts;
    for (const auto& p : points) pts.push_back(ToVector(p));
    const auto cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd table(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != cols) {
        throw InvalidArgument("feature table rows differ in length");
      }
      table.row(static_cast<Eigen::Index>(r)) = ToVector(rows[r]).transpose();
    }
    KernelSpec spec = KernelSpec::FiniteDictionary(std::move(pts), table);
    if (spec.dimension != dimension) {
      throw InvalidArgument("dictionary points do not match 'dimension'");
    }
    return spec;
  }
  throw InvalidArgument("unknown kernel kind '" + kind + "'");
}

DriftScenario ParseScenario(const json& obj) {
  const std::string where = "scenario";
  RejectUnknownKeys(obj,
                    {"kind", "anchors", "segment_length", "step_size",
                     "coefficient_scale", "noise", "label_clip", "max_norm", "box"},
                    where);
  DriftScenario s;
  const auto kind = Get<std::string>(obj, "kind", where);
  if (kind == "constant") {
    s.kind = DriftKind::kConstant;
  } else if (kind == "piecewise-constant") {
    s.kind = DriftKind::kPiecewiseConstant;
  } else if (kind == "coefficient-random-walk") {
    s.kind = DriftKind::kRandomWalk;
  } else {
    throw InvalidArgument("unknown scenario kind '" + kind + "'");
  }
  s.anchors = GetOr<int>(obj, "anchors", s.anchors, where);
  s.segment_length =
      GetOr<std::int64_t>(obj, "segment_length", s.segment_length, where);
  s.step_size = GetOr<double>(obj, "step_size", s.step_size, where);
  s.coefficient_scale =
      GetOr<double>(obj, "coefficient_scale", s.coefficient_scale, where);
  s.noise = GetOr<double>(obj, "noise", s.noise, where);
  s.label_clip = GetOr<double>(obj, "label_clip", s.label_clip, where);
  if (obj.contains("max_norm")) s.max_norm = Get<double>(obj, "max_norm", where);
  if (obj.contains("box")) {
    const auto box = Get<std::vector<double>>(obj, "box", where);
    if (box.size() != 2) throw InvalidArgument("'box' must be [low, high]");
    s.box_low = box[0];
    s.box_high = box[1];
  }
  s.Validate();
  return s;
}

const char* ScenarioKindName(DriftKind kind) {
  switch (kind) {
    case DriftKind::kConstant: return "constant";
    case DriftKind::kPiecewiseConstant: return "piecewise-constant";
    case DriftKind::kRandomWalk: return "coefficient-random-walk";
  }
  return "";
}

const char* HintKindName(HintKind kind) {
  switch (kind) {
    case HintKind::kZero: return "zero";
    case HintKind::kLastLabel: return "last-label";
    case HintKind::kExternal: return "external";
  }
  return "";
}

}  // namespace

RunConfig ParseRunConfig(const json& doc, const std::filesystem::path& base_dir) {
  const std::string where = "run config";
  RejectUnknownKeys(doc,
                    {"horizon", "dimension", "kernel", "grid_base",
                     "level2_ridge", "hint", "scenario", "input", "seed",
                     "output_dir", "evaluate_bounds", "envelope"},
                    where);
  RunConfig c;
  c.horizon = Get<std::int64_t>(doc, "horizon", where);
  if (c.horizon < 1) throw InvalidArgument("'horizon' must be >= 1");
  c.dimension = Get<int>(doc, "dimension", where);
  if (c.dimension < 1) throw InvalidArgument("'dimension' must be >= 1");
  if (!doc.contains("seed")) {
    throw InvalidArgument("'seed' is required; runs are never seeded implicitly");
  }
  c.seed = Get<std::uint64_t>(doc, "seed", where);
  c.kernel = doc.contains("kernel")
                 ? ParseKernel(doc.at("kernel"), c.dimension)
                 : KernelSpec::Gaussian(c.dimension, 1.0);
  c.grid_base = GetOr<double>(doc, "grid_base", c.grid_base, where);
  if (!(c.grid_base > 1.0)) throw InvalidArgument("'grid_base' must be > 1");
  c.level2_ridge = GetOr<double>(doc, "level2_ridge", c.level2_ridge, where);
  if (!(c.level2_ridge > 0.0)) {
    throw InvalidArgument("'level2_ridge' must be positive");
  }
  if (doc.contains("hint")) {
    const json& h = doc.at("hint");
    RejectUnknownKeys(h, {"policy", "clip"}, "hint");
    const auto policy = GetOr<std::string>(h, "policy", "last-label", "hint");
    if (policy == "zero") {
      c.hint.kind = HintKind::kZero;
    } else if (policy == "last-label") {
      c.hint.kind = HintKind::kLastLabel;
    } else if (policy == "external") {
      c.hint.kind = HintKind::kExternal;
    } else {
      throw InvalidArgument("unknown hint policy '" + policy + "'");
    }
    if (h.contains("clip")) {
      c.hint.clip = Get<double>(h, "clip", "hint");
      if (!(c.hint.clip >= 0.0)) throw InvalidArgument("hint clip must be >= 0");
      c.hint_clip_explicit = true;
    }
  }
  if (doc.contains("scenario") == doc.contains("input")) {
    throw InvalidArgument("exactly one of 'scenario' and 'input' is required");
  }
  if (doc.contains("scenario")) {
    c.scenario = ParseScenario(doc.at("scenario"));
    if (!c.hint_clip_explicit) c.hint.clip = c.scenario->label_clip;
  } else {
    const json& in = doc.at("input");
    RejectUnknownKeys(in, {"path", "format"}, "input");
    InputStreamConfig input;
    input.path = Get<std::string>(in, "path", "input");
    if (input.path.is_relative() && !base_dir.empty()) {
      input.path = base_dir / input.path;
    }
    const auto format = GetOr<std::string>(in, "format", "csv", "input");
    if (format == "csv") {
      input.format = StreamFormat::kCsv;
    } else if (format == "jsonl") {
      input.format = StreamFormat::kJsonLines;
    } else {
      throw InvalidArgument("unknown input format '" + format + "'");
    }
    if (!std::filesystem::exists(input.path)) {
      throw InvalidArgument("input file " + input.path.string() +
                            " does not exist");
    }
    c.input = std::move(input);
  }
  if (c.hint.kind == HintKind::kExternal && !c.input) {
    throw InvalidArgument("external hints need an input stream with hints");
  }
  c.output_dir = GetOr<std::string>(doc, "output_dir", "out", where);
  c.evaluate_bounds = GetOr<bool>(doc, "evaluate_bounds", true, where);
  if (doc.contains("envelope")) {
    const json& e = doc.at("envelope");
    RejectUnknownKeys(e, {"c1", "c2", "c3"}, "envelope");
    c.envelope.c1 = GetOr<double>(e, "c1", 1.0, "envelope");
    c.envelope.c2 = GetOr<double>(e, "c2", 1.0, "envelope");
    c.envelope.c3 = GetOr<double>(e, "c3", 1.0, "envelope");
    if (!(c.envelope.c1 > 0 && c.envelope.c2 > 0 && c.envelope.c3 > 0)) {
      throw InvalidArgument("envelope constants must be positive");
    }
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path.string() + " is not valid JSON: " +
                          e.what());
  }
  RunConfig config = ParseRunConfig(doc, path.parent_path());
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    config.output_dir = dir;
  }
  return config;
}

nlohmann::ordered_json RunConfigToJson(const RunConfig& c) {
  nlohmann::ordered_json doc;
  doc["horizon"] = c.horizon;
  doc["dimension"] = c.dimension;
  if (c.kernel.kind == KernelKind::kGaussianRff) {
    doc["kernel"] = {{"kind", "gaussian-rff"}, {"bandwidth", c.kernel.bandwidth}};
  } else {
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& p : c.kernel.points) {
      points.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < c.kernel.table.rows(); ++r) {
      const Eigen::VectorXd row = c.kernel.table.row(r).transpose();
      table.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    doc["kernel"] = {{"kind", "finite-dictionary"},
                     {"points", points},
                     {"table", table}};
  }
  doc["grid_base"] = c.grid_base;
  doc["level2_ridge"] = c.level2_ridge;
  doc["hint"] = {{"policy", HintKindName(c.hint.kind)}};
  if (c.hint_clip_explicit) doc["hint"]["clip"] = c.hint.clip;
  if (c.scenario) {
    const DriftScenario& s = *c.scenario;
    doc["scenario"] = {{"kind", ScenarioKindName(s.kind)},
                       {"anchors", s.anchors},
                       {"segment_length", s.segment_length},
                       {"step_size", s.step_size},
                       {"coefficient_scale", s.coefficient_scale},
                       {"noise", s.noise},
                       {"label_clip", s.label_clip},
                       {"box", {s.box_low, s.box_high}}};
    if (s.max_norm) doc["scenario"]["max_norm"] = *s.max_norm;
  }
  if (c.input) {
    doc["input"] = {
        {"path", c.input->path.string()},
        {"format", c.input->format == StreamFormat::kCsv ? "csv" : "jsonl"}};
  }
  doc["seed"] = c.seed;
  doc["output_dir"] = c.output_dir.string();
  doc["evaluate_bounds"] = c.evaluate_bounds;
  doc["envelope"] = {{"c1", c.envelope.c1},
                     {"c2", c.envelope.c2},
                     {"c3", c.envelope.c3}};
  return doc;
}

}  // namespace hvawd
