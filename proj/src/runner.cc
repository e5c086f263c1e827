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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "hvawd/errors.h"
#include "hvawd/hierarchy.h"
#include "hvawd/streams.h"

namespace hvawd {
namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LoadedStream {
  std::vector<StreamRecord> records;
  std::optional<ComparatorTrace> trace;
  double label_bound = 0.0;
};

LoadedStream LoadStream(const RunConfig& config) {
  LoadedStream out;
  if (config.scenario) {
    GeneratedStream g = Generate(*config.scenario, config.horizon,
                                 config.dimension, config.kernel, config.seed);
    out.records = std::move(g.records);
    out.trace = std::move(g.trace);
    out.label_bound = config.scenario->label_clip;
    return out;
  }
  IngestedStream in = Ingest(config.input->path,
                             {config.input->format, config.dimension});
  if (static_cast<std::int64_t>(in.records.size()) < config.horizon) {
    throw InvalidArgument("input stream has " +
                          std::to_string(in.records.size()) +
                          " rows, fewer than the horizon");
  }
  in.records.resize(static_cast<std::size_t>(config.horizon));
  out.records = std::move(in.records);
  for (const auto& r : out.records) {
    out.label_bound = std::max(out.label_bound, std::abs(r.y));
  }
  return out;
}

std::string GammaLabel(double gamma) {
  std::ostringstream s;
  s.precision(6);
  s << gamma;
  return s.str();
}

double Square(double v) { return v * v; }

BoundReport EvaluateBounds(const RunConfig& config,
                           const HierarchyForecaster& forecaster,
                           const RegretLedger& ledger,
                           const ComparatorTrace& trace, double label_bound,
                           const std::vector<Eigen::VectorXd>& zetas,
                           const std::vector<double>& labels, int best_expert) {
  BoundReport r;
  r.a = config.kernel.feature_bound;
  r.label_bound = label_bound;
  r.hint_bound = config.hint.kind == HintKind::kZero ? 0.0 : config.hint.clip;
  r.norm_bound = trace.norm_cap();
  r.grid_base = config.grid_base;
  r.level2_ridge = config.level2_ridge;
  r.horizon = config.horizon;
  r.path_length = trace.path_length();
  r.delta_sq = ledger.delta_sq_sum();
  r.max_delta_sq = ledger.max_delta_sq();
  r.rho_infinity = RhoInfinity(r.a, r.norm_bound, r.label_bound);
  for (const FeatureBlock& block : forecaster.blocks()) {
    FeatureBlockInputs in;
    in.a = r.a;
    in.label_bound = r.label_bound;
    in.hint_bound = r.hint_bound;
    in.norm_bound = r.norm_bound;
    in.features = block.features;
    in.grid_base = r.grid_base;
    in.ridge = r.level2_ridge;
    in.base_ridge = 1.0 / block.features;
    in.horizon = r.horizon;
    in.path_length = r.path_length;
    in.delta_sq = r.delta_sq;
    const FeatureBlockTerms terms = FeatureBlockBound(in);
    BlockBound b;
    b.features = block.features;
    b.grid_size = terms.grid_size;
    b.rho = terms.rho;
    b.eta_star = EtaStar(block.features, r.delta_sq, terms.rho, r.path_length);
    b.z_sq = terms.z_sq;
    b.feature_block = terms.total();
    r.blocks.push_back(b);
  }
  r.envelope_constants = config.envelope;
  EnvelopeInputs env;
  env.a = r.a;
  env.label_bound = r.label_bound;
  env.hint_bound = r.hint_bound;
  env.norm_bound = r.norm_bound;
  env.grid_base = r.grid_base;
  env.horizon = r.horizon;
  env.path_length = r.path_length;
  env.delta_sq = r.delta_sq;
  r.envelope = RegretEnvelope(config.envelope, env);

  const Eigen::Index k = static_cast<Eigen::Index>(zetas.front().size());
  const Eigen::VectorXd unit = Eigen::VectorXd::Unit(k, best_expert);
  const std::vector<double> zero_hints(labels.size(), 0.0);
  r.top_static_bound =
      StaticRegretBound(kTopLevelRidge, unit, zetas, labels, zero_hints);
  r.top_meta_regret = ledger.cumulative_loss() - ledger.expert_loss(best_expert);
  return r;
}

ordered_json NullableJson(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json NumberJson(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json BoundsToJson(const BoundReport& r) {
  ordered_json blocks = ordered_json::array();
  for (const BlockBound& b : r.blocks) {
    blocks.push_back({{"features", b.features},
                      {"grid_size", b.grid_size},
                      {"rho", b.rho},
                      {"eta_star", NumberJson(b.eta_star)},
                      {"z_sq", b.z_sq},
                      {"feature_block", b.feature_block}});
  }
  return {{"a", r.a},
          {"label_bound", r.label_bound},
          {"hint_bound", r.hint_bound},
          {"norm_bound", r.norm_bound},
          {"grid_base", r.grid_base},
          {"level2_ridge", r.level2_ridge},
          {"horizon", r.horizon},
          {"path_length", r.path_length},
          {"delta_sq", r.delta_sq},
          {"max_delta_sq", r.max_delta_sq},
          {"rho_infinity", r.rho_infinity},
          {"blocks", blocks},
          {"envelope_constants",
           {{"c1", r.envelope_constants.c1},
            {"c2", r.envelope_constants.c2},
            {"c3", r.envelope_constants.c3}}},
          {"envelope", r.envelope},
          {"top_static_bound", r.top_static_bound},
          {"top_meta_regret", r.top_meta_regret}};
}

ordered_json ExpertsToJson(const std::vector<ExpertRegret>& experts) {
  ordered_json out = ordered_json::array();
  for (const ExpertRegret& e : experts) {
    out.push_back({{"name", e.name},
                   {"loss", e.loss},
                   {"regret", NumberJson(e.regret)}});
  }
  return out;
}

}  // namespace

void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw InvalidArgument("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

RunSummary Run(const RunConfig& config, bool write_outputs) {
  LoadedStream stream = LoadStream(config);
  const ComparatorTrace* trace = stream.trace ? &*stream.trace : nullptr;

  HierarchyOptions options;
  options.horizon = config.horizon;
  options.kernel = config.kernel;
  options.grid_base = config.grid_base;
  options.level2_ridge = config.level2_ridge;
  options.hint = config.hint;
  options.master_seed = config.seed;
  HierarchyForecaster forecaster(options);

  const std::vector<int>& feature_entries = forecaster.feature_grid().entries;
  std::vector<std::vector<double>> base_losses;
  for (const FeatureBlock& block : forecaster.blocks()) {
    base_losses.emplace_back(static_cast<std::size_t>(block.grid.size()), 0.0);
  }

  RegretLedger ledger;
  std::vector<Eigen::VectorXd> zetas;
  std::vector<double> labels;
  zetas.reserve(stream.records.size());
  labels.reserve(stream.records.size());

  std::ostringstream csv;
  csv << "t,prediction,label,hint";
  for (int m : feature_entries) csv << ",zeta_m" << m;
  csv << ",loss,cumulative_loss";
  if (trace) csv << ",comparator,cumulative_regret";
  csv << '\n';

  double comparator_loss = 0.0;
  std::chrono::steady_clock::duration loop_time{};
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const StreamRecord& rec = stream.records[i];
    const auto step = static_cast<std::int64_t>(i) + 1;
    StepTrace st;
    try {
      const auto start = std::chrono::steady_clock::now();
      st = forecaster.Predict(rec.x, rec.hint);
      forecaster.Commit(st, rec.y);
      loop_time += std::chrono::steady_clock::now() - start;
    } catch (const NumericError& e) {
      if (e.step() != 0) throw;
      throw NumericError(e.what(), step);
    }

    for (std::size_t b = 0; b < st.base_predictions.size(); ++b) {
      const Eigen::VectorXd& p = st.base_predictions[b];
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        base_losses[b][static_cast<std::size_t>(k)] += 0.5 * Square(p(k) - rec.y);
      }
    }
    LedgerStep ls;
    ls.x = rec.x;
    ls.prediction = st.prediction;
    ls.label = rec.y;
    ls.hint = st.hint;
    ls.expert_predictions = st.feature_predictions;
    zetas.push_back(st.feature_predictions);
    labels.push_back(rec.y);
    ledger.Record(std::move(ls));

    csv << step << ',' << FormatDouble(st.prediction) << ','
        << FormatDouble(rec.y) << ',' << FormatDouble(st.hint);
    for (Eigen::Index k = 0; k < st.feature_predictions.size(); ++k) {
      csv << ',' << FormatDouble(st.feature_predictions(k));
    }
    csv << ',' << FormatDouble(0.5 * Square(st.prediction - rec.y)) << ','
        << FormatDouble(ledger.cumulative_loss());
    if (trace) {
      const double f = (*trace)[i](rec.x);
      comparator_loss += 0.5 * Square(f - rec.y);
      csv << ',' << FormatDouble(f) << ','
          << FormatDouble(ledger.cumulative_loss() - comparator_loss);
    }
    csv << '\n';
  }

  RunSummary s;
  s.horizon = config.horizon;
  s.cumulative_loss = ledger.cumulative_loss();
  s.delta_sq = ledger.delta_sq_sum();
  s.max_delta_sq = ledger.max_delta_sq();
  s.label_bound = stream.label_bound;
  if (trace) {
    s.comparator_loss = comparator_loss;
    s.dynamic_regret = DynamicRegret(ledger, *trace);
    s.path_length = trace->path_length();
    s.norm_cap = trace->norm_cap();
  }
  const double reference = trace ? comparator_loss : kNaN;
  int best_expert = 0;
  for (int k = 0; k < ledger.expert_count(); ++k) {
    const double loss = ledger.expert_loss(k);
    s.feature_experts.push_back({"m=" + std::to_string(feature_entries[k]),
                                 loss, loss - reference});
    if (loss < ledger.expert_loss(best_expert)) best_expert = k;
  }
  for (std::size_t b = 0; b < forecaster.blocks().size(); ++b) {
    const FeatureBlock& block = forecaster.blocks()[b];
    for (std::size_t k = 0; k < base_losses[b].size(); ++k) {
      const double loss = base_losses[b][k];
      s.base_experts.push_back({"m=" + std::to_string(block.features) +
                                    ",gamma=" + GammaLabel(block.grid.gammas[k]),
                                loss, loss - reference});
    }
  }
  for (const FeatureBlock& block : forecaster.blocks()) {
    for (const DiscountedVaw& e : block.experts) {
      s.conditioning_resets += e.conditioning_resets();
    }
  }
  if (config.evaluate_bounds && trace && !stream.records.empty()) {
    s.bounds = EvaluateBounds(config, forecaster, ledger, *trace,
                              stream.label_bound, zetas, labels, best_expert);
  }
  s.seconds_per_step =
      stream.records.empty()
          ? 0.0
          : std::chrono::duration<double>(loop_time).count() /
                static_cast<double>(stream.records.size());

  if (write_outputs) {
    std::filesystem::create_directories(config.output_dir);
    WriteFileAtomically(config.output_dir / "steps.csv", csv.str());
    ordered_json doc = SummaryToJson(s);
    doc["config"] = RunConfigToJson(config);
    WriteFileAtomically(config.output_dir / "summary.json", doc.dump(2) + "\n");
  }
  return s;
}

nlohmann::ordered_json SummaryToJson(const RunSummary& s) {
  ordered_json doc;
  doc["horizon"] = s.horizon;
  doc["cumulative_loss"] = s.cumulative_loss;
  doc["comparator_loss"] = NullableJson(s.comparator_loss);
  doc["dynamic_regret"] = NullableJson(s.dynamic_regret);
  doc["path_length"] = NullableJson(s.path_length);
  doc["norm_cap"] = NullableJson(s.norm_cap);
  doc["delta_sq"] = s.delta_sq;
  doc["max_delta_sq"] = s.max_delta_sq;
  doc["label_bound"] = s.label_bound;
  doc["feature_experts"] = ExpertsToJson(s.feature_experts);
  doc["base_experts"] = ExpertsToJson(s.base_experts);
  doc["conditioning_resets"] = s.conditioning_resets;
  doc["bounds"] = s.bounds ? BoundsToJson(*s.bounds) : ordered_json(nullptr);
  return doc;
}

SweepRegime ParseSweepRegime(const std::string& name) {
  if (name == "constant") return SweepRegime::kConstant;
  if (name == "sqrt-drift") return SweepRegime::kSqrtDrift;
  if (name == "linear-drift") return SweepRegime::kLinearDrift;
  throw InvalidArgument("unknown regime '" + name +
                        "' (expected constant, sqrt-drift or linear-drift)");
}

const char* SweepRegimeName(SweepRegime regime) {
  switch (regime) {
    case SweepRegime::kConstant: return "constant";
    case SweepRegime::kSqrtDrift: return "sqrt-drift";
    case SweepRegime::kLinearDrift: return "linear-drift";
  }
  return "";
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("log-log fit needs two or more paired points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return kNaN;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgument("log-log fit needs distinct x values");
  return sxy / sxx;
}

SweepReport Sweep(const RunConfig& base, const std::vector<std::int64_t>& horizons,
                  SweepRegime regime, int seeds) {
  if (horizons.size() < 3) {
    throw InvalidArgument("a sweep needs at least three horizons");
  }
  if (!base.scenario) {
    throw InvalidArgument("a sweep needs a synthetic scenario");
  }
  if (seeds < 1) throw InvalidArgument("a sweep needs at least one seed");
  for (std::int64_t t : horizons) {
    if (t < 1) throw InvalidArgument("sweep horizons must be >= 1");
  }

  // Path length of a random walk grows like T * step, so a step proportional
  // to T^(exponent - 1) gives P_T ~ T^exponent.
  double exponent = 0.0;
  DriftKind kind = DriftKind::kConstant;
  if (regime == SweepRegime::kSqrtDrift) {
    exponent = 0.5;
    kind = DriftKind::kRandomWalk;
  } else if (regime == SweepRegime::kLinearDrift) {
    exponent = 1.0;
    kind = DriftKind::kRandomWalk;
  }
  const double first = static_cast<double>(horizons.front());

  SweepReport report;
  report.regime = regime;
  std::vector<double> ts;
  std::vector<double> regrets;
  std::vector<double> times;
  for (std::int64_t t : horizons) {
    SweepRow row;
    row.horizon = t;
    for (int s = 0; s < seeds; ++s) {
      RunConfig c = base;
      c.horizon = t;
      c.seed = base.seed + static_cast<std::uint64_t>(s);
      c.evaluate_bounds = false;
      c.scenario->kind = kind;
      c.scenario->step_size =
          base.scenario->step_size *
          std::pow(static_cast<double>(t) / first, exponent - 1.0);
      const RunSummary summary = Run(c, /*write_outputs=*/false);
      row.regrets.push_back(*summary.dynamic_regret);
      row.mean_regret += *summary.dynamic_regret / seeds;
      row.mean_path_length += *summary.path_length / seeds;
      row.seconds_per_step += summary.seconds_per_step / seeds;
    }
    ts.push_back(static_cast<double>(t));
    regrets.push_back(row.mean_regret);
    times.push_back(row.seconds_per_step);
    report.rows.push_back(std::move(row));
  }
  report.regret_slope = LogLogSlope(ts, regrets);
  report.time_slope = LogLogSlope(ts, times);
  return report;
}

nlohmann::ordered_json SweepToJson(const SweepReport& report) {
  ordered_json rows = ordered_json::array();
  for (const SweepRow& r : report.rows) {
    rows.push_back({{"horizon", r.horizon},
                    {"mean_regret", r.mean_regret},
                    {"mean_path_length", r.mean_path_length},
                    {"seconds_per_step", r.seconds_per_step},
                    {"regrets", r.regrets}});
  }
  return {{"regime", SweepRegimeName(report.regime)},
          {"rows", rows},
          {"regret_slope", NumberJson(report.regret_slope)},
          {"time_slope", NumberJson(report.time_slope)}};
}

}  // namespace hvawd
