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

#ifndef HVAWD_BOUNDS_H_
#define HVAWD_BOUNDS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hvawd/features.h"

namespace hvawd {

// One round as seen by the ledger.
struct LedgerStep {
  Eigen::VectorXd x;
  double prediction = 0.0;
  double label = 0.0;
  double hint = 0.0;
  // Predictions of the experts being tracked (e.g. the level-3 inputs).
  Eigen::VectorXd expert_predictions;
  // |Phi(x_t)|^2 when the caller tracks a single feature space.
  std::optional<double> feature_norm_sq;
};

// Append-only record of a run with running aggregates.
class RegretLedger {
 public:
  void Record(LedgerStep step);

  std::size_t size() const { return steps_.size(); }
  const std::vector<LedgerStep>& steps() const { return steps_; }

  // sum_t (prediction - label)^2 / 2.
  double cumulative_loss() const { return cumulative_loss_; }
  // sum_t (label - hint)^2.
  double delta_sq_sum() const { return delta_sq_sum_; }
  double max_delta_sq() const { return max_delta_sq_; }
  // sum_t (expert_predictions(k) - label)^2 / 2.
  double expert_loss(int k) const { return expert_losses_.at(k); }
  int expert_count() const { return static_cast<int>(expert_losses_.size()); }

  // Per-step streams.
  std::vector<double> AlgorithmLosses() const;
  std::vector<double> HintResiduals() const;

 private:
  std::vector<LedgerStep> steps_;
  double cumulative_loss_ = 0.0;
  double delta_sq_sum_ = 0.0;
  double max_delta_sq_ = 0.0;
  std::vector<double> expert_losses_;
};

// Sequence f_1..f_T of comparator functions with its path length
// P_T = sum_t ||f_{t+1} - f_t||_H and norm cap R = max_t ||f_t||_H.
class ComparatorTrace {
 public:
  ComparatorTrace() = default;
  explicit ComparatorTrace(std::vector<RkhsFunction> functions);

  // a followed by b; the junction increment ||b_1 - a_T||_H is included.
  static ComparatorTrace Concatenate(const ComparatorTrace& a,
                                     const ComparatorTrace& b);

  std::size_t size() const { return functions_.size(); }
  const std::vector<RkhsFunction>& functions() const { return functions_; }
  const RkhsFunction& operator[](std::size_t t) const { return functions_[t]; }
  // ||f_{t+1} - f_t||_H for t = 0..T-2.
  const std::vector<double>& increments() const { return increments_; }
  double path_length() const { return path_length_; }
  double norm_cap() const { return norm_cap_; }

 private:
  std::vector<RkhsFunction> functions_;
  std::vector<double> increments_;
  double path_length_ = 0.0;
  double norm_cap_ = 0.0;
};

// Path length computed from scratch through joint grams.
double PathLength(const std::vector<RkhsFunction>& functions);

// sum_t l_t(w_t) - (1/2) sum_t (f_t(x_t) - y_t)^2. May be negative.
double DynamicRegret(const RegretLedger& ledger, const ComparatorTrace& trace);

// Regret of predictions against vector comparators u_t in feature space:
// sum_t [ (p_t - y_t)^2 - (<u_t, phi_t> - y_t)^2 ] / 2.
double VectorDynamicRegret(std::span<const double> predictions,
                           std::span<const Eigen::VectorXd> comparators,
                           std::span<const Eigen::VectorXd> features,
                           std::span<const double> labels);

// Right-hand side of the discounted VAW dynamic regret bound, by term.
struct DynamicRegretTerms {
  double initial = 0.0;        // gamma lambda/2 |u_1|^2
  double log_term = 0.0;       // m/2 max D_t^2 ln(1 + sum gamma^{T-t}|phi_t|^2/(lambda m))
  double variation = 0.0;      // gamma sum_t [F_t(u_{t+1}) - F_t(u_t)]
  double discount_term = 0.0;  // m/2 D_{1:T}^2 ln(1/gamma)

  double total() const { return initial + log_term + variation + discount_term; }
};

// Evaluates the bound for DVAW(gamma, lambda) run on (features, labels,
// hints) against comparators u_1..u_T. The variation term uses
//   F_t(w) = gamma^t lambda/2 |w|^2 + sum_{s<=t} gamma^{t-s} l_s(w)
// summed directly, which costs O(T^2 m). gamma must lie in (0, 1].
DynamicRegretTerms DynamicRegretBound(double gamma, double ridge,
                            std::span<const Eigen::VectorXd> comparators,
                            std::span<const Eigen::VectorXd> features,
                            std::span<const double> labels,
                            std::span<const double> hints);

// Static VAW bound against a fixed u:
//   lambda/2 |u|^2 + m/2 max D_t^2 ln(1 + sum_t |phi_t|^2 / (lambda m)).
double StaticRegretBound(double ridge, const Eigen::VectorXd& comparator,
                         std::span<const Eigen::VectorXd> features,
                         std::span<const double> labels,
                         std::span<const double> hints);

// rho_m = a(aR + Y) + 2 R a^2 / m.
double RhoM(double a, double norm_bound, double label_bound, int features);
// rho_infinity = a(aR + Y).
double RhoInfinity(double a, double norm_bound, double label_bound);

// eta* = sqrt(m D^2 / (2 rho P)); +infinity when rho P == 0.
double EtaStar(int features, double delta_sq, double rho, double path_length);

// psi(eta) = eta rho P + m D^2 / (2 eta).
double Psi(double eta, int features, double delta_sq, double rho,
           double path_length);

struct FeatureBlockInputs {
  double a = 1.0;
  double label_bound = 1.0;  // Y
  double hint_bound = 1.0;   // Y~
  double norm_bound = 0.0;   // R
  int features = 1;          // m
  double grid_base = 2.0;    // b
  double ridge = 1.0;        // lambda of the level-2 aggregator
  double base_ridge = 1.0;   // lambda-bar of the base experts
  std::int64_t horizon = 1;
  double path_length = 0.0;
  double delta_sq = 0.0;     // D_{1:T}^2
};

struct FeatureBlockTerms {
  int grid_size = 0;  // M, the discount grid including the gamma = 0 slot
  double rho = 0.0;
  double z_sq = 0.0;  // Z_{T,m}^2
  double tracking = 0.0;       // (1 + b) sqrt(m rho P D^2 / 2)
  double hint_offset = 0.0;    // (Y + Y~)^2 / 2
  double base_ridge_terms = 0.0;
  double log_term = 0.0;
  double approximation = 0.0;  // a^2 R^2 T / (2m)
  double meta = 0.0;           // lambda/2 + M Y^2/2 ln(1 + Z^2/(lambda M))

  double total() const {
    return tracking + hint_offset + base_ridge_terms + log_term +
           approximation + meta;
  }
};

// Expected-regret bound of the level-2 aggregator for one m. Z^2 takes the
// aggregator ridge inside its logarithm.
FeatureBlockTerms FeatureBlockBound(const FeatureBlockInputs& in);

struct EnvelopeConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

struct EnvelopeInputs {
  double a = 1.0;
  double label_bound = 1.0;
  double hint_bound = 1.0;
  double norm_bound = 0.0;
  double grid_base = 2.0;
  std::int64_t horizon = 1;
  double path_length = 0.0;
  double delta_sq = 0.0;
};

// c1 ((1+b)^2 (1+a^2) rho_inf R^2 P D^2 T)^{1/3} + c2 (Y+Y~)^2 sqrt(T) ln T
//   + c3 a^2 R^2 sqrt(T).
// A scaling diagnostic only; the constants are not those of any inequality.
double RegretEnvelope(const EnvelopeConstants& c, const EnvelopeInputs& in);

struct BlockBound {
  int features = 0;
  int grid_size = 0;
  double rho = 0.0;
  double eta_star = 0.0;
  double z_sq = 0.0;
  double feature_block = 0.0;
};

// Bound values and the constants they were evaluated with.
struct BoundReport {
  double a = 0.0;
  double label_bound = 0.0;
  double hint_bound = 0.0;
  double norm_bound = 0.0;
  double grid_base = 0.0;
  double level2_ridge = 0.0;
  std::int64_t horizon = 0;
  double path_length = 0.0;
  double delta_sq = 0.0;
  double max_delta_sq = 0.0;
  double rho_infinity = 0.0;
  std::vector<BlockBound> blocks;
  EnvelopeConstants envelope_constants;
  double envelope = 0.0;
  // Level-3 static bound against the best single feature expert, and the
  // measured regret it caps.
  double top_static_bound = 0.0;
  double top_meta_regret = 0.0;
};

}  // namespace hvawd

#endif  // HVAWD_BOUNDS_H_
