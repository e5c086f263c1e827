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

#include "hvawd/verify.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "hvawd/bounds.h"
#include "hvawd/errors.h"
#include "hvawd/features.h"
#include "hvawd/forecaster.h"
#include "hvawd/hierarchy.h"
#include "hvawd/oracles.h"
#include "hvawd/rng.h"
#include "json.hpp"

namespace hvawd::verify {
namespace {

using Clock = std::chrono::steady_clock;

Check AtMost(std::string name, double observed, double tolerance,
             std::string detail = {}) {
  return Check{std::move(name), tolerance, observed, observed <= tolerance,
               std::move(detail)};
}

Eigen::VectorXd UniformVector(Rng& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

Eigen::MatrixXd RandomSpd(Rng& rng, Eigen::Index m) {
  Eigen::MatrixXd b(m, m);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = u(rng);
  Eigen::MatrixXd spd = b * b.transpose() / static_cast<double>(m) +
                        0.1 * Eigen::MatrixXd::Identity(m, m);
  return 0.5 * (spd + spd.transpose());
}

double MaxAbs(const Eigen::MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

template <typename Fn>
SuiteReport Timed(std::string name, Fn&& body) {
  const auto start = Clock::now();
  SuiteReport report;
  report.suite = std::move(name);
  body(report);
  report.seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

// Features from a real gaussian feature map at random inputs.
std::vector<Eigen::VectorXd> FeatureStream(Rng& rng, int m, int horizon) {
  const KernelSpec spec = KernelSpec::Gaussian(2, 1.0);
  const FeatureMap map = FeatureMap::Sample(spec, m, rng());
  std::vector<Eigen::VectorXd> features;
  for (int t = 0; t < horizon; ++t) {
    features.push_back(map.Evaluate(UniformVector(rng, 2, -2.0, 2.0)));
  }
  return features;
}

struct MonteCarlo {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void Add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double Mean() const { return sum / n; }
  double StandardError() const {
    const double mean = Mean();
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

SuiteReport WoodburyOracle(int probes, int max_dimension, std::uint64_t seed) {
  return Timed("woodbury-oracle", [&](SuiteReport& report) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(1, max_dimension);
    std::uniform_real_distribution<double> discount(0.1, 1.0);
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
      const int m = dim(rng);
      const Eigen::MatrixXd inv = RandomSpd(rng, m);
      const Eigen::VectorXd v = UniformVector(rng, m, -1.0, 1.0);
      const double gamma = p % 10 == 0 ? 1.0 : discount(rng);
      const Eigen::MatrixXd fast = WoodburyStep(inv, v, gamma);
      const Eigen::MatrixXd dense = oracle::DiscountedInverse(inv, v, gamma);
      worst = std::max(worst, MaxAbs(fast - dense));
    }
    report.checks.push_back(AtMost("max |woodbury - dense inverse|", worst,
                                   1e-8,
                                   std::to_string(probes) + " probes"));
  });
}

SuiteReport FtrlOracle(int instances, int max_horizon, int max_dimension,
                       std::uint64_t seed) {
  return Timed("ftrl-oracle", [&](SuiteReport& report) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(1, max_dimension);
    std::uniform_int_distribution<int> len(1, max_horizon);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    double worst_prediction = 0.0;
    double worst_inverse = 0.0;
    double worst_sum = 0.0;
    for (int i = 0; i < instances; ++i) {
      const int m = dim(rng);
      const int horizon = len(rng);
      // Discounts from the range the hierarchy grid uses, [2m/(2m+1), 1].
      const double gamma_lo = 2.0 * m / (2.0 * m + 1.0);
      const double gamma =
          i % 5 == 0 ? 1.0 : gamma_lo + (1.0 - gamma_lo) * unit(rng);
      const double ridge = 0.1 + 1.9 * unit(rng);
      const auto features = FeatureStream(rng, m, horizon);
      std::vector<double> labels;
      DiscountedVaw dvaw(m, gamma, ridge);
      for (int t = 1; t <= horizon; ++t) {
        const double hint = t == 1 ? 0.0 : sym(rng);
        const auto ticket = dvaw.Predict(features[t - 1], hint);
        const Eigen::VectorXd w = oracle::DiscountedFtrlArgmin(
            gamma, ridge, std::span(features).first(t), labels, hint);
        const double expected = w.dot(features[t - 1]);
        worst_prediction = std::max(
            worst_prediction, std::abs(ticket.prediction - expected) /
                                  std::max(1.0, std::abs(expected)));
        labels.push_back(sym(rng));
        dvaw.Commit(ticket, labels.back());
        const auto prefix = std::span(features).first(t);
        const Eigen::MatrixXd direct =
            oracle::DiscountedGram(gamma, ridge, prefix).fullPivLu().inverse();
        worst_inverse = std::max(worst_inverse,
                                 MaxAbs(dvaw.inv_sigma() - direct) /
                                     std::max(1.0, MaxAbs(direct)));
        worst_sum = std::max(
            worst_sum,
            MaxAbs(dvaw.disc_sum() - oracle::DiscountedSum(gamma, prefix, labels)));
      }
    }
    report.checks.push_back(
        AtMost("max |prediction - FTRL argmin prediction|", worst_prediction,
               1e-8, "relative to max(1, |argmin prediction|)"));
    report.checks.push_back(
        AtMost("max |inv_sigma - direct inverse|", worst_inverse, 1e-8,
               "relative to max(1, |direct inverse|_max)"));
    report.checks.push_back(
        AtMost("max |disc_sum - direct sum|", worst_sum, 1e-10));
  });
}

SuiteReport ReductionIdentity(int instances, std::uint64_t seed) {
  return Timed("reduction", [&](SuiteReport& report) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_int_distribution<int> len(1, 100);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    std::uniform_real_distribution<double> ridge_dist(0.1, 2.0);
    double worst_aggregator = 0.0;
    double worst_dense = 0.0;
    for (int i = 0; i < instances; ++i) {
      const int m = dim(rng);
      const int horizon = len(rng);
      const double ridge = ridge_dist(rng);
      const auto features = FeatureStream(rng, m, horizon);
      std::vector<double> labels;
      DiscountedVaw dvaw(m, 1.0, ridge);
      VawAggregator vaw(m, ridge);
      for (int t = 1; t <= horizon; ++t) {
        const auto a = dvaw.Predict(features[t - 1], 0.0);
        const auto b = vaw.Predict(features[t - 1]);
        worst_aggregator =
            std::max(worst_aggregator, std::abs(a.prediction - b.prediction));
        const double dense = oracle::VawPrediction(
            ridge, std::span(features).first(t), labels);
        worst_dense = std::max(worst_dense, std::abs(a.prediction - dense));
        labels.push_back(sym(rng));
        dvaw.Commit(a, labels.back());
        vaw.Commit(b, labels.back());
      }
    }
    report.checks.push_back(AtMost("max |DVAW(gamma=1) - VAW aggregator|",
                                   worst_aggregator, 1e-12));
    report.checks.push_back(AtMost("max |DVAW(gamma=1) - dense standard VAW|",
                                   worst_dense, 1e-12));
  });
}

SuiteReport BoundDominance(int trials, int max_horizon, int max_dimension,
                           std::uint64_t seed) {
  return Timed("bound-dominance", [&](SuiteReport& report) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(1, max_dimension);
    std::uniform_int_distribution<int> len(2, max_horizon);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    int violations = 0;
    std::int64_t resets = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
      const int m = dim(rng);
      const int horizon = len(rng);
      double gamma = 1.0;
      switch (trial % 3) {
        case 1: gamma = 0.3 + 0.7 * unit(rng); break;
        case 2: gamma = 0.9 + 0.1 * unit(rng); break;
        default: break;
      }
      const double ridge = std::pow(10.0, -2.0 + 3.0 * unit(rng));
      const double feature_scale = std::array{0.3, 1.0, 2.0}[trial % 3];
      const double label_scale = std::array{0.5, 1.0, 3.0}[(trial / 3) % 3];
      std::vector<Eigen::VectorXd> features;
      std::vector<double> labels;
      std::vector<double> hints;
      std::vector<Eigen::VectorXd> comparators;
      Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
      for (int k = 0; k < m; ++k) u(k) = normal(rng);
      const int comparator_kind = (trial / 9) % 3;
      for (int t = 0; t < horizon; ++t) {
        features.push_back(feature_scale * UniformVector(rng, m, -1.0, 1.0));
        labels.push_back(label_scale * (2.0 * unit(rng) - 1.0));
        const bool hinted = trial % 4 != 0;
        hints.push_back(t == 0 || !hinted
                            ? 0.0
                            : std::clamp(labels[t - 1] + 0.3 * normal(rng),
                                         -5.0, 5.0));
        if (comparator_kind == 1) {
          for (int k = 0; k < m; ++k) u(k) += 0.1 * normal(rng);
        } else if (comparator_kind == 2) {
          for (int k = 0; k < m; ++k) u(k) = 2.0 * normal(rng);
        }
        comparators.push_back(u);
      }
      DiscountedVaw dvaw(m, gamma, ridge);
      std::vector<double> predictions;
      for (int t = 0; t < horizon; ++t) {
        const auto ticket = dvaw.Predict(features[t], hints[t]);
        predictions.push_back(ticket.prediction);
        dvaw.Commit(ticket, labels[t]);
      }
      resets += dvaw.conditioning_resets();
      const double regret =
          VectorDynamicRegret(predictions, comparators, features, labels);
      const double bound =
          DynamicRegretBound(gamma, ridge, comparators, features, labels, hints)
              .total();
      worst_gap = std::max(worst_gap, regret - bound);
      if (regret > bound + 1e-8) ++violations;
    }
    report.checks.push_back(AtMost("violations of regret <= bound + 1e-8",
                                   violations, 0,
                                   std::to_string(trials) + " trials, " +
                                       std::to_string(resets) +
                                       " conditioning resets"));
    report.checks.push_back(Check{"max (regret - bound)", 1e-8, worst_gap,
                                  worst_gap <= 1e-8, "informational"});
  });
}

SuiteReport StaticBound(int instances, std::uint64_t seed) {
  return Timed("static-bound", [&](SuiteReport& report) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_int_distribution<int> len(1, 200);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    double worst_specialization = 0.0;
    for (int i = 0; i < instances; ++i) {
      const int m = dim(rng);
      const int horizon = len(rng);
      const double ridge = std::pow(10.0, -1.0 + 2.0 * unit(rng));
      const bool hinted = i % 2 == 1;
      const auto features = FeatureStream(rng, m, horizon);
      std::vector<double> labels;
      std::vector<double> hints;
      std::vector<double> predictions;
      // Even instances run the aggregator (zero hints), odd ones DVAW(1) with
      // last-label hints.
      DiscountedVaw dvaw(m, 1.0, ridge);
      VawAggregator vaw(m, ridge);
      for (int t = 0; t < horizon; ++t) {
        const double hint = hinted && t > 0 ? labels.back() : 0.0;
        hints.push_back(hint);
        const double label = std::clamp(
            std::sin(3.0 * features[t].sum()) + 0.2 * (2.0 * unit(rng) - 1.0),
            -1.0, 1.0);
        labels.push_back(label);
        if (hinted) {
          const auto ticket = dvaw.Predict(features[t], hint);
          predictions.push_back(ticket.prediction);
          dvaw.Commit(ticket, label);
        } else {
          const auto ticket = vaw.Predict(features[t]);
          predictions.push_back(ticket.prediction);
          vaw.Commit(ticket, label);
        }
      }
      const Eigen::VectorXd u =
          oracle::RidgeComparator(ridge, features, labels);
      const std::vector<Eigen::VectorXd> constant(horizon, u);
      const double regret =
          VectorDynamicRegret(predictions, constant, features, labels);
      const double bound =
          StaticRegretBound(ridge, u, features, labels, hints);
      worst_gap = std::max(worst_gap, regret - bound);
      if (regret > bound + 1e-8) ++violations;
      const double dynamic =
          DynamicRegretBound(1.0, ridge, constant, features, labels, hints).total();
      worst_specialization =
          std::max(worst_specialization, std::abs(dynamic - bound));
    }
    report.checks.push_back(AtMost("violations of static regret <= bound",
                                   violations, 0,
                                   std::to_string(instances) + " instances"));
    report.checks.push_back(AtMost(
        "max |dynamic bound(gamma=1, constant u) - static bound|",
        worst_specialization, 1e-12));
    report.checks.push_back(Check{"max (regret - bound)", 1e-8, worst_gap,
                                  worst_gap <= 1e-8, "informational"});
  });
}

SuiteReport Unbiasedness(const UnbiasednessOptions& options) {
  return Timed("unbiasedness", [&](SuiteReport& report) {
    Rng rng(options.seed);
    const KernelSpec spec = KernelSpec::Gaussian(3, 1.0);
    const double a = spec.feature_bound;

    // Kernel estimate.
    const Eigen::VectorXd x = UniformVector(rng, 3, -1.0, 1.0);
    const Eigen::VectorXd y = UniformVector(rng, 3, -1.0, 1.0);
    const double exact = Kernel(spec, x, y);
    MonteCarlo kernel_mc;
    for (int i = 0; i < options.kernel_maps; ++i) {
      const FeatureMap map = FeatureMap::Sample(
          spec, options.kernel_features, StableHash(options.seed, "kernel", i));
      kernel_mc.Add(map.Evaluate(x).dot(map.Evaluate(y)));
    }
    const double kernel_error = std::abs(kernel_mc.Mean() - exact);
    report.checks.push_back(AtMost(
        "|mean <Phi(x),Phi(y)> - k(x,y)| vs 4 a^2/sqrt(n m)", kernel_error,
        4.0 * a * a /
            std::sqrt(static_cast<double>(options.kernel_maps) *
                      options.kernel_features)));
    report.checks.push_back(
        AtMost("|mean <Phi(x),Phi(y)> - k(x,y)| vs 4 SE", kernel_error,
               4.0 * kernel_mc.StandardError()));

    // Comparator lift of a five-anchor expansion.
    std::vector<Eigen::VectorXd> anchors;
    for (int i = 0; i < 5; ++i) anchors.push_back(UniformVector(rng, 3, -1, 1));
    const RkhsFunction f(spec, anchors, UniformVector(rng, 5, -1.0, 1.0));
    const double norm_sq = std::pow(RkhsNorm(f), 2);
    const Eigen::VectorXd probe = UniformVector(rng, 3, -1.0, 1.0);
    const double target = f(probe);
    for (int m : options.lift_features) {
      MonteCarlo estimate;
      MonteCarlo sq_error;
      MonteCarlo lifted_norm;
      for (int i = 0; i < options.lift_maps; ++i) {
        const FeatureMap map = FeatureMap::Sample(
            spec, m, StableHash(options.seed, "lift", 100000ULL * m + i));
        const Eigen::VectorXd w = LiftComparator(f, map);
        const double est = w.dot(map.Evaluate(probe));
        estimate.Add(est);
        sq_error.Add((est - target) * (est - target));
        lifted_norm.Add(w.squaredNorm());
      }
      const std::string tag = "m=" + std::to_string(m) + ": ";
      report.checks.push_back(
          AtMost(tag + "|mean <w,Phi(x)> - f(x)| vs 4 SE",
                 std::abs(estimate.Mean() - target),
                 4.0 * estimate.StandardError()));
      report.checks.push_back(
          AtMost(tag + "mean squared error vs a^2|f|^2/m + 4 SE",
                 sq_error.Mean(),
                 a * a * norm_sq / m + 4.0 * sq_error.StandardError()));
      report.checks.push_back(
          AtMost(tag + "|mean |w|^2 - |f|_H^2| vs 4 SE",
                 std::abs(lifted_norm.Mean() - norm_sq),
                 4.0 * lifted_norm.StandardError()));
    }
  });
}

SuiteReport GridExactness() {
  return Timed("grid-exactness", [&](SuiteReport& report) {
    const std::vector<double> bases = {1.5, 2.0, std::numbers::e};
    std::vector<std::int64_t> horizons;
    for (std::int64_t p = 1; p <= 4096; p *= 2) {
      for (std::int64_t t : {p - 1, p, p + 1}) {
        if (t >= 1 && t <= 4096) horizons.push_back(t);
      }
    }
    for (std::int64_t t : {3, 5, 6, 10, 100, 1000, 3000}) horizons.push_back(t);
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()),
                   horizons.end());

    int grids = 0;
    int mismatches = 0;
    int structure_violations = 0;
    for (double b : bases) {
      for (int m = 1; m <= 64; ++m) {
        for (std::int64_t horizon : horizons) {
          ++grids;
          const GammaGrid grid = BuildGammaGrid(m, horizon, b);
          const auto expected = oracle::EnumerateEtaGrid(m, horizon, b);
          if (grid.etas != expected) ++mismatches;
          bool ok = grid.size() == static_cast<int>(grid.etas.size()) + 1 &&
                    grid.gammas[0] == 0.0;
          for (std::size_t k = 0; ok && k < grid.etas.size(); ++k) {
            const double g = grid.etas[k] / (1.0 + grid.etas[k]);
            ok = grid.gammas[k + 1] == g && g > 0.0 && g < 1.0 &&
                 grid.gammas[k + 1] > grid.gammas[k];
          }
          // Cardinality bound; for T = 1 the grid is the single capped eta.
          if (horizon >= 2) {
            const double cap =
                2.0 + std::ceil(std::log(horizon / 2.0) / std::log(b) - 1e-9);
            ok = ok && grid.size() <= cap;
          } else {
            ok = ok && grid.size() == 2;
          }
          if (!ok) ++structure_violations;
        }
      }
    }
    report.checks.push_back(AtMost("gamma grids differing from enumeration",
                                   mismatches, 0,
                                   std::to_string(grids) + " grids"));
    report.checks.push_back(AtMost("gamma grid structure violations",
                                   structure_violations, 0));

    int feature_mismatches = 0;
    int bracket_violations = 0;
    for (std::int64_t horizon = 1; horizon <= 4096; ++horizon) {
      const FeatureGrid grid = BuildFeatureGrid(horizon);
      if (grid.entries != oracle::EnumerateFeatureGrid(horizon)) {
        ++feature_mismatches;
      }
      const double largest = grid.entries.back();
      const double root = std::sqrt(static_cast<double>(horizon));
      if (largest < root || largest > 2.0 * root) ++bracket_violations;
    }
    report.checks.push_back(AtMost("feature grids differing from enumeration",
                                   feature_mismatches, 0, "T = 1..4096"));
    report.checks.push_back(AtMost(
        "largest feature count outside [sqrt T, 2 sqrt T]", bracket_violations,
        0));
  });
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> names = {
      "woodbury-oracle", "ftrl-oracle",  "reduction",     "bound-dominance",
      "static-bound",    "unbiasedness", "grid-exactness"};
  return names;
}

std::vector<SuiteReport> RunSuite(const std::string& name) {
  static const std::map<std::string, std::function<SuiteReport()>> suites = {
      {"woodbury-oracle", [] { return WoodburyOracle(); }},
      {"ftrl-oracle", [] { return FtrlOracle(); }},
      {"reduction", [] { return ReductionIdentity(); }},
      {"bound-dominance", [] { return BoundDominance(); }},
      {"static-bound", [] { return StaticBound(); }},
      {"unbiasedness", [] { return Unbiasedness(); }},
      {"grid-exactness", [] { return GridExactness(); }},
  };
  std::vector<SuiteReport> reports;
  if (name == "all") {
    for (const auto& n : SuiteNames()) reports.push_back(suites.at(n)());
    return reports;
  }
  const auto it = suites.find(name);
  if (it == suites.end()) throw InvalidArgument("unknown suite '" + name + "'");
  reports.push_back(it->second());
  return reports;
}

std::string ReportJson(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json out;
  bool all_passed = true;
  out["suites"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json suite;
    suite["suite"] = r.suite;
    suite["passed"] = r.passed();
    suite["seconds"] = r.seconds;
    suite["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
      suite["checks"].push_back({{"name", c.name},
                                 {"tolerance", c.tolerance},
                                 {"observed", c.observed},
                                 {"passed", c.passed},
                                 {"detail", c.detail}});
    }
    all_passed = all_passed && r.passed();
    out["suites"].push_back(std::move(suite));
  }
  out["passed"] = all_passed;
  return out.dump(2);
}

}  // namespace hvawd::verify
