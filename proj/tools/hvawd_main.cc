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

// hvawd: run the hierarchical forecaster, its verification suites, and
// horizon sweeps.
//
//   hvawd run --config <file>
//   hvawd verify --suite <name|all> [--report <file>]
//   hvawd sweep --config <file> --horizons a,b,c --regime <name> [--seeds n]
//
// Exit codes: 0 success, 1 failed checks or other errors, 2 invalid
// configuration or arguments, 3 numeric failure during a run.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hvawd/config.h"
#include "hvawd/errors.h"
#include "hvawd/runner.h"
#include "hvawd/verify.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

int RunCommand(const std::string& config_path) {
  const hvawd::RunConfig config = hvawd::LoadRunConfig(config_path);
  const hvawd::RunSummary s = hvawd::Run(config);
  std::printf("steps            %lld\n", static_cast<long long>(s.horizon));
  std::printf("cumulative loss  %.6f\n", s.cumulative_loss);
  if (s.dynamic_regret) {
    std::printf("dynamic regret   %.6f\n", *s.dynamic_regret);
    std::printf("path length      %.6f\n", *s.path_length);
  }
  std::printf("seconds/step     %.3e\n", s.seconds_per_step);
  std::printf("outputs          %s\n", config.output_dir.string().c_str());
  return 0;
}

int VerifyCommand(const std::string& suite, const std::string& report_path) {
  const std::vector<hvawd::verify::SuiteReport> reports = hvawd::verify::RunSuite(suite);
  bool ok = true;
  for (const auto& report : reports) {
    for (const auto& check : report.checks) {
      std::printf("%s  %-14s %-40s observed=%.3e tol=%.1e\n",
                  check.passed ? "PASS" : "FAIL", report.suite.c_str(),
                  check.name.c_str(), check.observed, check.tolerance);
    }
    ok = ok && report.passed();
  }
  const std::string json = hvawd::verify::ReportJson(reports);
  if (report_path.empty()) {
    std::cout << json;
  } else {
    hvawd::WriteFileAtomically(report_path, json);
  }
  return ok ? 0 : kExitFailure;
}

std::vector<std::int64_t> ParseHorizons(const std::string& list) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const std::string item = list.substr(pos, comma - pos);
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw hvawd::InvalidArgument("bad horizon '" + item + "'");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

int SweepCommand(const std::string& config_path, const std::string& horizons,
                 const std::string& regime_name, int seeds) {
  const hvawd::RunConfig config = hvawd::LoadRunConfig(config_path);
  const hvawd::SweepRegime regime = hvawd::ParseSweepRegime(regime_name);
  const hvawd::SweepReport report =
      hvawd::Sweep(config, ParseHorizons(horizons), regime, seeds);
  std::printf("%8s %14s %12s %14s\n", "T", "mean_regret", "path_length",
              "sec/step");
  for (const auto& row : report.rows) {
    std::printf("%8lld %14.6f %12.6f %14.3e\n",
                static_cast<long long>(row.horizon), row.mean_regret,
                row.mean_path_length, row.seconds_per_step);
  }
  std::printf("regret slope %.4f\ntime slope   %.4f\n", report.regret_slope,
              report.time_slope);
  std::filesystem::create_directories(config.output_dir);
  hvawd::WriteFileAtomically(
      config.output_dir / ("sweep_" + regime_name + ".json"),
      hvawd::SweepToJson(report).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical discounted VAW forecaster"};
  app.require_subcommand(1);

  std::string config_path;
  std::string suite;
  std::string report_path;
  std::string horizons;
  std::string regime;
  int seeds = 1;

  CLI::App* run = app.add_subcommand("run", "Run the forecaster on one stream");
  run->add_option("--config", config_path, "Run configuration (JSON)")
      ->required();

  CLI::App* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", suite, "Suite name or 'all'")->required();
  verify->add_option("--report", report_path,
                     "Write the JSON report here instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "Fit regret scaling over T");
  sweep->add_option("--config", config_path, "Template configuration")
      ->required();
  sweep->add_option("--horizons", horizons, "Comma-separated horizons")
      ->required();
  sweep->add_option("--regime", regime,
                    "constant, sqrt-drift or linear-drift")
      ->required();
  sweep->add_option("--seeds", seeds, "Seeds averaged per horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*run) return RunCommand(config_path);
    if (*verify) return VerifyCommand(suite, report_path);
    return SweepCommand(config_path, horizons, regime, seeds);
  } catch (const hvawd::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const hvawd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const hvawd::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const hvawd::NumericError& e) {
    std::cerr << "numeric error at step " << e.step() << ": " << e.what()
              << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
