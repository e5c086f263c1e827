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

#ifndef HVAWD_VERIFY_H_
#define HVAWD_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace hvawd::verify {

// One named comparison: passed means observed is within tolerance in the
// direction the check defines (documented per suite).
struct Check {
  std::string name;
  double tolerance = 0.0;
  double observed = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
};

// Max-norm deviation of WoodburyStep from dense inversion over random
// symmetric PD probes. Check: max deviation <= 1e-8.
SuiteReport WoodburyOracle(int probes = 200, int max_dimension = 8,
                           std::uint64_t seed = 1);

// DiscountedVaw predictions against the dense FTRL argmin at every step, the
// recursive Sigma^{-1} and b_t against direct reconstruction. Check: max
// deviation <= 1e-8.
SuiteReport FtrlOracle(int instances = 50, int max_horizon = 100,
                       int max_dimension = 6, std::uint64_t seed = 2);

// DiscountedVaw(gamma = 1, zero hints) against VawAggregator (<= 1e-12) and
// against the dense standard VAW solve (<= 1e-12).
SuiteReport ReductionIdentity(int instances = 20, std::uint64_t seed = 3);

// Measured DVAW regret minus the dynamic regret bound over random instances.
// Check: zero instances above 1e-8.
SuiteReport BoundDominance(int trials = 200, int max_horizon = 200,
                           int max_dimension = 6, std::uint64_t seed = 4);

// Measured VAW regret against the best ridge comparator minus the static
// bound (zero violations), and the gamma = 1 constant-comparator dynamic
// bound against the static bound (<= 1e-12).
SuiteReport StaticBound(int instances = 100, std::uint64_t seed = 5);

struct UnbiasednessOptions {
  int kernel_maps = 50;
  int kernel_features = 64;
  int lift_maps = 200;
  std::vector<int> lift_features = {8, 32, 128};
  std::uint64_t seed = 6;
};

// Monte-Carlo checks of the random feature map: kernel unbiasedness,
// comparator-lift unbiasedness, its mean squared error against a^2|f|^2/m,
// and E|w|^2 = |f|_H^2, each with four standard errors of slack.
SuiteReport Unbiasedness(const UnbiasednessOptions& options = {});

// Gamma and feature grids against brute-force enumeration over
// m <= 64, T <= 4096, b in {1.5, 2, e}.
SuiteReport GridExactness();

// Names accepted by RunSuite, in execution order for "all".
const std::vector<std::string>& SuiteNames();

// Throws InvalidArgument for unknown names.
std::vector<SuiteReport> RunSuite(const std::string& name);

// Machine-readable report.
std::string ReportJson(const std::vector<SuiteReport>& reports);

}  // namespace hvawd::verify

#endif  // HVAWD_VERIFY_H_
