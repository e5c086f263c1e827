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

#ifndef HVAWD_FEATURES_H_
#define HVAWD_FEATURES_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hvawd {

enum class KernelKind { kGaussianRff, kFiniteDictionary };

// Describes a kernel k(x, y) = E[phi(x; theta) phi(y; theta)] through its
// base feature phi and the parameter law of theta.
//
// gaussian-rff:       phi(x; w, u) = sqrt(2) cos(w.x + u), w ~ N(0, I/sigma^2),
//                     u ~ U[0, 2pi). Feature bound a = sqrt(2).
// finite-dictionary:  theta is uniform over the columns of `table`; inputs are
//                     restricted to `points` and phi(points[r]; j) = table(r, j).
//                     Feature bound a = max |table(r, j)|.
struct KernelSpec {
  KernelKind kind = KernelKind::kGaussianRff;
  int dimension = 0;
  double bandwidth = 1.0;
  std::vector<Eigen::VectorXd> points;
  Eigen::MatrixXd table;
  double feature_bound = 0.0;

  static KernelSpec Gaussian(int dimension, double bandwidth);
  static KernelSpec FiniteDictionary(std::vector<Eigen::VectorXd> points,
                                     Eigen::MatrixXd table);

  // Throws InvalidArgument when an invariant does not hold.
  void Validate() const;

  // Row of `points` equal to x; throws InvalidArgument if x is not a
  // dictionary point. Only meaningful for finite-dictionary kernels.
  int DictionaryRow(const Eigen::VectorXd& x) const;

  friend bool operator==(const KernelSpec& lhs, const KernelSpec& rhs);
};

// Closed-form kernel value.
double Kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y);

Eigen::MatrixXd GramMatrix(const KernelSpec& spec,
                           const std::vector<Eigen::VectorXd>& points);

// A frozen draw theta_1..theta_m together with the kernel it approximates.
// Immutable after construction.
class FeatureMap {
 public:
  // Draws m i.i.d. parameters from the kernel's parameter law.
  static FeatureMap Sample(const KernelSpec& spec, int m, std::uint64_t seed);

  // Gaussian map with caller-chosen parameters; `frequencies` is m x d.
  static FeatureMap WithGaussianParams(const KernelSpec& spec,
                                       Eigen::MatrixXd frequencies,
                                       Eigen::VectorXd phases);

  // Phi_m(x) = m^{-1/2} (phi(x; theta_1), ..., phi(x; theta_m)).
  Eigen::VectorXd Evaluate(const Eigen::VectorXd& x) const;
  // Same as Evaluate, writing into `out` (resized to m).
  void EvaluateInto(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  // Unscaled phi(x; theta_i).
  double RawFeature(int i, const Eigen::VectorXd& x) const;

  int size() const { return m_; }
  std::uint64_t seed() const { return seed_; }
  const KernelSpec& spec() const { return spec_; }
  const Eigen::MatrixXd& frequencies() const { return frequencies_; }
  const Eigen::VectorXd& phases() const { return phases_; }
  const std::vector<int>& atoms() const { return atoms_; }

 private:
  FeatureMap(KernelSpec spec, int m, std::uint64_t seed)
      : spec_(std::move(spec)), m_(m), seed_(seed) {}

  void CheckInput(const Eigen::VectorXd& x) const;

  KernelSpec spec_;
  int m_;
  std::uint64_t seed_;
  Eigen::MatrixXd frequencies_;  // gaussian: m x d
  Eigen::VectorXd phases_;       // gaussian: m
  std::vector<int> atoms_;       // finite-dictionary: column per feature
};

// f = sum_i c_i k(., x_i), a finite kernel expansion. Its L2(P)
// representer is alpha_f(theta) = sum_i c_i phi(x_i; theta).
class RkhsFunction {
 public:
  RkhsFunction() = default;
  RkhsFunction(KernelSpec spec, std::vector<Eigen::VectorXd> anchors,
               Eigen::VectorXd coefficients);

  static RkhsFunction Zero(const KernelSpec& spec);

  double operator()(const Eigen::VectorXd& x) const;

  // alpha_f(theta_i) for feature i of `map`.
  double Representer(const FeatureMap& map, int i) const;

  // The expansion f - g over the union of both anchor sets.
  RkhsFunction Minus(const RkhsFunction& g) const;

  const KernelSpec& spec() const { return spec_; }
  const std::vector<Eigen::VectorXd>& anchors() const { return anchors_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

 private:
  KernelSpec spec_;
  std::vector<Eigen::VectorXd> anchors_;
  Eigen::VectorXd coefficients_;
};

// Quadratic forms c'Kc in [-kGramClampTolerance, 0) clamp to zero; anything
// more negative raises InternalError.
inline constexpr double kGramClampTolerance = 1e-8;

// sqrt(c'Kc).
double RkhsNorm(const RkhsFunction& f);

// ||f - g||_H via the joint gram of both expansions.
double RkhsDistance(const RkhsFunction& f, const RkhsFunction& g);

// w = m^{-1/2} (alpha_f(theta_1), ..., alpha_f(theta_m)). Then <w, Phi_m(x)>
// is an unbiased estimate of f(x) and E||w||^2 = ||f||_H^2.
Eigen::VectorXd LiftComparator(const RkhsFunction& f, const FeatureMap& map);

}  // namespace hvawd

#endif  // HVAWD_FEATURES_H_
