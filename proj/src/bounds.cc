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

#include "hvawd/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hvawd/errors.h"
#include "hvawd/hierarchy.h"

namespace hvawd {
namespace {

double HalfSquare(double r) { return 0.5 * r * r; }

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": length mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) +
                          ")");
  }
}

void CheckNonNegative(double v, const char* what) {
  if (!(v >= 0.0)) throw InvalidArgument(std::string(what) + " must be >= 0");
}

}  // namespace

void RegretLedger::Record(LedgerStep step) {
  if (!steps_.empty() &&
      step.expert_predictions.size() !=
          static_cast<Eigen::Index>(expert_losses_.size())) {
    throw InvalidArgument("expert count changed between ledger steps");
  }
  if (steps_.empty()) expert_losses_.assign(step.expert_predictions.size(), 0);
  cumulative_loss_ += HalfSquare(step.prediction - step.label);
  const double delta_sq = (step.label - step.hint) * (step.label - step.hint);
  delta_sq_sum_ += delta_sq;
  max_delta_sq_ = std::max(max_delta_sq_, delta_sq);
  for (std::size_t k = 0; k < expert_losses_.size(); ++k) {
    expert_losses_[k] += HalfSquare(step.expert_predictions(k) - step.label);
  }
  steps_.push_back(std::move(step));
}

std::vector<double> RegretLedger::AlgorithmLosses() const {
  std::vector<double> losses;
  losses.reserve(steps_.size());
  for (const auto& s : steps_) losses.push_back(HalfSquare(s.prediction - s.label));
  return losses;
}

std::vector<double> RegretLedger::HintResiduals() const {
  std::vector<double> residuals;
  residuals.reserve(steps_.size());
  for (const auto& s : steps_) residuals.push_back(s.label - s.hint);
  return residuals;
}

ComparatorTrace::ComparatorTrace(std::vector<RkhsFunction> functions)
    : functions_(std::move(functions)) {
  for (std::size_t t = 0; t < functions_.size(); ++t) {
    norm_cap_ = std::max(norm_cap_, RkhsNorm(functions_[t]));
    if (t + 1 < functions_.size()) {
      increments_.push_back(RkhsDistance(functions_[t + 1], functions_[t]));
      path_length_ += increments_.back();
    }
  }
}

ComparatorTrace ComparatorTrace::Concatenate(const ComparatorTrace& a,
                                             const ComparatorTrace& b) {
  std::vector<RkhsFunction> all = a.functions_;
  all.insert(all.end(), b.functions_.begin(), b.functions_.end());
  return ComparatorTrace(std::move(all));
}

double PathLength(const std::vector<RkhsFunction>& functions) {
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < functions.size(); ++t) {
    total += RkhsDistance(functions[t + 1], functions[t]);
  }
  return total;
}

double DynamicRegret(const RegretLedger& ledger, const ComparatorTrace& trace) {
  CheckSameLength(ledger.size(), trace.size(), "dynamic regret");
  double regret = 0.0;
  for (std::size_t t = 0; t < ledger.size(); ++t) {
    const LedgerStep& s = ledger.steps()[t];
    regret += HalfSquare(s.prediction - s.label) -
              HalfSquare(trace[t](s.x) - s.label);
  }
  return regret;
}

double VectorDynamicRegret(std::span<const double> predictions,
                           std::span<const Eigen::VectorXd> comparators,
                           std::span<const Eigen::VectorXd> features,
                           std::span<const double> labels) {
  CheckSameLength(predictions.size(), labels.size(), "vector regret");
  CheckSameLength(comparators.size(), labels.size(), "vector regret");
  CheckSameLength(features.size(), labels.size(), "vector regret");
  double regret = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    regret += HalfSquare(predictions[t] - labels[t]) -
              HalfSquare(comparators[t].dot(features[t]) - labels[t]);
  }
  return regret;
}

DynamicRegretTerms DynamicRegretBound(double gamma, double ridge,
                            std::span<const Eigen::VectorXd> comparators,
                            std::span<const Eigen::VectorXd> features,
                            std::span<const double> labels,
                            std::span<const double> hints) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("dynamic regret bound needs gamma in (0, 1]");
  }
  if (!(ridge > 0.0)) throw InvalidArgument("ridge weight must be positive");
  const std::size_t horizon = labels.size();
  CheckSameLength(comparators.size(), horizon, "dynamic regret bound");
  CheckSameLength(features.size(), horizon, "dynamic regret bound");
  CheckSameLength(hints.size(), horizon, "dynamic regret bound");
  DynamicRegretTerms terms;
  if (horizon == 0) return terms;
  const double m = static_cast<double>(features[0].size());

  double max_delta_sq = 0.0;
  double delta_sq_sum = 0.0;
  double discounted_norms = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const double d = labels[t] - hints[t];
    max_delta_sq = std::max(max_delta_sq, d * d);
    delta_sq_sum += d * d;
    discounted_norms = gamma * discounted_norms + features[t].squaredNorm();
  }
  terms.initial = 0.5 * gamma * ridge * comparators[0].squaredNorm();
  terms.log_term =
      0.5 * m * max_delta_sq * std::log1p(discounted_norms / (ridge * m));
  terms.discount_term = 0.5 * m * delta_sq_sum * -std::log(gamma);

  // F_t(w) for 1-based t.
  const auto discounted_objective = [&](std::size_t t,
                                        const Eigen::VectorXd& w) {
    double value = std::pow(gamma, static_cast<double>(t)) * 0.5 * ridge *
                   w.squaredNorm();
    for (std::size_t s = 1; s <= t; ++s) {
      value += std::pow(gamma, static_cast<double>(t - s)) *
               HalfSquare(w.dot(features[s - 1]) - labels[s - 1]);
    }
    return value;
  };
  double variation = 0.0;
  for (std::size_t t = 1; t < horizon; ++t) {
    variation += discounted_objective(t, comparators[t]) -
                 discounted_objective(t, comparators[t - 1]);
  }
  terms.variation = gamma * variation;
  return terms;
}

double StaticRegretBound(double ridge, const Eigen::VectorXd& comparator,
                         std::span<const Eigen::VectorXd> features,
                         std::span<const double> labels,
                         std::span<const double> hints) {
  if (!(ridge > 0.0)) throw InvalidArgument("ridge weight must be positive");
  CheckSameLength(features.size(), labels.size(), "static bound");
  CheckSameLength(hints.size(), labels.size(), "static bound");
  const double m = static_cast<double>(comparator.size());
  double max_delta_sq = 0.0;
  double norms = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const double d = labels[t] - hints[t];
    max_delta_sq = std::max(max_delta_sq, d * d);
    norms += features[t].squaredNorm();
  }
  return 0.5 * ridge * comparator.squaredNorm() +
         0.5 * m * max_delta_sq * std::log1p(norms / (ridge * m));
}

double RhoM(double a, double norm_bound, double label_bound, int features) {
  if (features < 1) throw InvalidArgument("rho_m needs m >= 1");
  CheckNonNegative(a, "a");
  CheckNonNegative(norm_bound, "R");
  CheckNonNegative(label_bound, "Y");
  return a * (a * norm_bound + label_bound) +
         2.0 * norm_bound * a * a / features;
}

double RhoInfinity(double a, double norm_bound, double label_bound) {
  CheckNonNegative(a, "a");
  CheckNonNegative(norm_bound, "R");
  CheckNonNegative(label_bound, "Y");
  return a * (a * norm_bound + label_bound);
}

double EtaStar(int features, double delta_sq, double rho, double path_length) {
  if (features < 1) throw InvalidArgument("eta* needs m >= 1");
  CheckNonNegative(delta_sq, "delta^2");
  CheckNonNegative(rho, "rho");
  CheckNonNegative(path_length, "path length");
  if (rho * path_length == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(features * delta_sq / (2.0 * rho * path_length));
}

double Psi(double eta, int features, double delta_sq, double rho,
           double path_length) {
  if (!(eta > 0.0)) throw InvalidArgument("psi needs eta > 0");
  return eta * rho * path_length + features * delta_sq / (2.0 * eta);
}

FeatureBlockTerms FeatureBlockBound(const FeatureBlockInputs& in) {
  if (in.features < 1) throw InvalidArgument("feature-block bound needs m >= 1");
  if (in.horizon < 1) throw InvalidArgument("horizon must be >= 1");
  if (!(in.ridge > 0.0) || !(in.base_ridge > 0.0)) {
    throw InvalidArgument("ridge weights must be positive");
  }
  CheckNonNegative(in.hint_bound, "Y~");
  CheckNonNegative(in.path_length, "path length");
  CheckNonNegative(in.delta_sq, "delta^2");

  FeatureBlockTerms terms;
  const double m = in.features;
  const double horizon = static_cast<double>(in.horizon);
  const double y = in.label_bound;
  const double yt = in.hint_bound;
  const double r = in.norm_bound;
  const double a2 = in.a * in.a;
  const double y_sum_sq = (y + yt) * (y + yt);

  terms.grid_size = BuildGammaGrid(in.features, in.horizon, in.grid_base).size();
  const double big_m = terms.grid_size;
  terms.rho = RhoM(in.a, r, y, in.features);
  terms.z_sq = ((big_m - 1.0) * (y_sum_sq + 4.0 * y * y) + yt * yt) * horizon +
               2.0 * (big_m - 1.0) * y_sum_sq * m *
                   std::log1p(a2 * horizon / in.ridge);

  terms.tracking = (1.0 + in.grid_base) *
                   std::sqrt(m * terms.rho * in.path_length * in.delta_sq / 2.0);
  terms.hint_offset = 0.5 * y_sum_sq;
  terms.base_ridge_terms =
      in.base_ridge * r * in.path_length + 0.5 * in.base_ridge * r * r;
  terms.log_term =
      0.5 * m * y_sum_sq * std::log1p(a2 * horizon / (in.base_ridge * m));
  terms.approximation = a2 * r * r * horizon / (2.0 * m);
  terms.meta = 0.5 * in.ridge + 0.5 * big_m * y * y *
                                    std::log1p(terms.z_sq / (in.ridge * big_m));
  return terms;
}

double RegretEnvelope(const EnvelopeConstants& c, const EnvelopeInputs& in) {
  if (!(c.c1 > 0.0 && c.c2 > 0.0 && c.c3 > 0.0)) {
    throw InvalidArgument("envelope constants must be positive");
  }
  if (in.horizon < 1) throw InvalidArgument("horizon must be >= 1");
  const double horizon = static_cast<double>(in.horizon);
  const double a2 = in.a * in.a;
  const double r2 = in.norm_bound * in.norm_bound;
  const double rho_inf = RhoInfinity(in.a, in.norm_bound, in.label_bound);
  const double b1 = 1.0 + in.grid_base;
  const double y_sum = in.label_bound + in.hint_bound;
  const double dynamic = std::cbrt(b1 * b1 * (1.0 + a2) * rho_inf * r2 *
                                   in.path_length * in.delta_sq * horizon);
  return c.c1 * dynamic +
         c.c2 * y_sum * y_sum * std::sqrt(horizon) * std::log(horizon) +
         c.c3 * a2 * r2 * std::sqrt(horizon);
}

}  // namespace hvawd
