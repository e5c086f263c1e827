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

#include "hvawd/features.h"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "hvawd/errors.h"
#include "hvawd/rng.h"

namespace hvawd {
namespace {

void CheckDimension(const KernelSpec& spec, const Eigen::VectorXd& x) {
  if (x.size() != spec.dimension) {
    throw InvalidArgument("input has dimension " + std::to_string(x.size()) +
                          ", kernel expects " +
                          std::to_string(spec.dimension));
  }
}

// Value of q = c'Kc after the clamp policy.
double ClampedQuadraticForm(double q) {
  if (q < -kGramClampTolerance) {
    throw InternalError("gram quadratic form is negative: " +
                        std::to_string(q));
  }
  return q < 0.0 ? 0.0 : q;
}

}  // namespace

KernelSpec KernelSpec::Gaussian(int dimension, double bandwidth) {
  KernelSpec spec;
  spec.kind = KernelKind::kGaussianRff;
  spec.dimension = dimension;
  spec.bandwidth = bandwidth;
  spec.feature_bound = std::numbers::sqrt2;
  spec.Validate();
  return spec;
}

KernelSpec KernelSpec::FiniteDictionary(std::vector<Eigen::VectorXd> points,
                                        Eigen::MatrixXd table) {
  KernelSpec spec;
  spec.kind = KernelKind::kFiniteDictionary;
  spec.dimension = points.empty() ? 0 : static_cast<int>(points[0].size());
  spec.points = std::move(points);
  spec.table = std::move(table);
  spec.feature_bound = spec.table.size() > 0 ? spec.table.cwiseAbs().maxCoeff()
                                             : 0.0;
  spec.Validate();
  return spec;
}

void KernelSpec::Validate() const {
  if (dimension < 1) throw InvalidArgument("kernel dimension must be >= 1");
  if (!(feature_bound > 0.0) || !std::isfinite(feature_bound)) {
    throw InvalidArgument("feature bound must be positive and finite");
  }
  switch (kind) {
    case KernelKind::kGaussianRff:
      if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InvalidArgument("gaussian bandwidth must be positive");
      }
      if (feature_bound != std::numbers::sqrt2) {
        throw InvalidArgument("gaussian-rff feature bound must be sqrt(2)");
      }
      break;
    case KernelKind::kFiniteDictionary:
      if (points.empty() || table.cols() == 0) {
        throw InvalidArgument("finite dictionary needs points and features");
      }
      if (table.rows() != static_cast<Eigen::Index>(points.size())) {
        throw InvalidArgument("feature table needs one row per point");
      }
      for (const auto& p : points) {
        if (p.size() != dimension) {
          throw InvalidArgument("dictionary points differ in dimension");
        }
      }
      if (!table.allFinite()) {
        throw InvalidArgument("feature table has non-finite entries");
      }
      if (table.cwiseAbs().maxCoeff() > feature_bound) {
        throw InvalidArgument("feature table exceeds the feature bound");
      }
      break;
  }
}

int KernelSpec::DictionaryRow(const Eigen::VectorXd& x) const {
  for (std::size_t r = 0; r < points.size(); ++r) {
    if (points[r].size() == x.size() && points[r] == x) {
      return static_cast<int>(r);
    }
  }
  throw InvalidArgument("input is not a dictionary point");
}

bool operator==(const KernelSpec& lhs, const KernelSpec& rhs) {
  if (lhs.kind != rhs.kind || lhs.dimension != rhs.dimension ||
      lhs.feature_bound != rhs.feature_bound) {
    return false;
  }
  if (lhs.kind == KernelKind::kGaussianRff) {
    return lhs.bandwidth == rhs.bandwidth;
  }
  if (lhs.points.size() != rhs.points.size() ||
      lhs.table.rows() != rhs.table.rows() ||
      lhs.table.cols() != rhs.table.cols() || lhs.table != rhs.table) {
    return false;
  }
  for (std::size_t i = 0; i < lhs.points.size(); ++i) {
    if (lhs.points[i] != rhs.points[i]) return false;
  }
  return true;
}

double Kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  CheckDimension(spec, x);
  CheckDimension(spec, y);
  if (spec.kind == KernelKind::kGaussianRff) {
    const double sq = (x - y).squaredNorm();
    return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
  }
  const int rx = spec.DictionaryRow(x);
  const int ry = spec.DictionaryRow(y);
  return spec.table.row(rx).dot(spec.table.row(ry)) /
         static_cast<double>(spec.table.cols());
}

Eigen::MatrixXd GramMatrix(const KernelSpec& spec,
                           const std::vector<Eigen::VectorXd>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      gram(i, j) = gram(j, i) = Kernel(spec, points[i], points[j]);
    }
  }
  return gram;
}

FeatureMap FeatureMap::Sample(const KernelSpec& spec, int m,
                              std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("feature count must be >= 1");
  spec.Validate();
  FeatureMap map(spec, m, seed);
  Rng rng(seed);
  if (spec.kind == KernelKind::kGaussianRff) {
    std::normal_distribution<double> normal(0.0, 1.0 / spec.bandwidth);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    map.frequencies_.resize(m, spec.dimension);
    map.phases_.resize(m);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < spec.dimension; ++k) {
        map.frequencies_(i, k) = normal(rng);
      }
      map.phases_(i) = phase(rng);
    }
  } else {
    std::uniform_int_distribution<int> atom(
        0, static_cast<int>(spec.table.cols()) - 1);
    map.atoms_.resize(m);
    for (int i = 0; i < m; ++i) map.atoms_[i] = atom(rng);
  }
  return map;
}

FeatureMap FeatureMap::WithGaussianParams(const KernelSpec& spec,
                                          Eigen::MatrixXd frequencies,
                                          Eigen::VectorXd phases) {
  spec.Validate();
  if (spec.kind != KernelKind::kGaussianRff) {
    throw InvalidArgument("explicit parameters require a gaussian kernel");
  }
  const auto m = static_cast<int>(frequencies.rows());
  if (m < 1 || frequencies.cols() != spec.dimension || phases.size() != m) {
    throw InvalidArgument("parameter shapes do not match the kernel");
  }
  FeatureMap map(spec, m, 0);
  map.frequencies_ = std::move(frequencies);
  map.phases_ = std::move(phases);
  return map;
}

void FeatureMap::CheckInput(const Eigen::VectorXd& x) const {
  CheckDimension(spec_, x);
}

double FeatureMap::RawFeature(int i, const Eigen::VectorXd& x) const {
  CheckInput(x);
  if (spec_.kind == KernelKind::kGaussianRff) {
    return std::numbers::sqrt2 *
           std::cos(frequencies_.row(i).dot(x) + phases_(i));
  }
  return spec_.table(spec_.DictionaryRow(x), atoms_[i]);
}

void FeatureMap::EvaluateInto(const Eigen::VectorXd& x,
                              Eigen::VectorXd& out) const {
  CheckInput(x);
  out.resize(m_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  if (spec_.kind == KernelKind::kGaussianRff) {
    out.noalias() = frequencies_ * x;
    for (int i = 0; i < m_; ++i) {
      out(i) = scale * std::numbers::sqrt2 * std::cos(out(i) + phases_(i));
    }
  } else {
    const int row = spec_.DictionaryRow(x);
    for (int i = 0; i < m_; ++i) out(i) = scale * spec_.table(row, atoms_[i]);
  }
}

Eigen::VectorXd FeatureMap::Evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out;
  EvaluateInto(x, out);
  return out;
}

RkhsFunction::RkhsFunction(KernelSpec spec,
                           std::vector<Eigen::VectorXd> anchors,
                           Eigen::VectorXd coefficients)
    : spec_(std::move(spec)),
      anchors_(std::move(anchors)),
      coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != static_cast<Eigen::Index>(anchors_.size())) {
    throw InvalidArgument("need one coefficient per anchor");
  }
  for (const auto& a : anchors_) CheckDimension(spec_, a);
}

RkhsFunction RkhsFunction::Zero(const KernelSpec& spec) {
  return RkhsFunction(spec, {}, Eigen::VectorXd());
}

double RkhsFunction::operator()(const Eigen::VectorXd& x) const {
  CheckDimension(spec_, x);
  double value = 0.0;
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    value += coefficients_(i) * Kernel(spec_, x, anchors_[i]);
  }
  return value;
}

double RkhsFunction::Representer(const FeatureMap& map, int i) const {
  double value = 0.0;
  for (std::size_t k = 0; k < anchors_.size(); ++k) {
    value += coefficients_(k) * map.RawFeature(i, anchors_[k]);
  }
  return value;
}

RkhsFunction RkhsFunction::Minus(const RkhsFunction& g) const {
  if (!(spec_ == g.spec_)) {
    throw InvalidArgument("functions live in different kernel spaces");
  }
  std::vector<Eigen::VectorXd> anchors = anchors_;
  anchors.insert(anchors.end(), g.anchors_.begin(), g.anchors_.end());
  Eigen::VectorXd coefficients(coefficients_.size() + g.coefficients_.size());
  coefficients << coefficients_, -g.coefficients_;
  return RkhsFunction(spec_, std::move(anchors), std::move(coefficients));
}

double RkhsNorm(const RkhsFunction& f) {
  if (f.anchors().empty()) return 0.0;
  const Eigen::MatrixXd gram = GramMatrix(f.spec(), f.anchors());
  const auto& c = f.coefficients();
  return std::sqrt(ClampedQuadraticForm(c.dot(gram * c)));
}

double RkhsDistance(const RkhsFunction& f, const RkhsFunction& g) {
  return RkhsNorm(f.Minus(g));
}

Eigen::VectorXd LiftComparator(const RkhsFunction& f, const FeatureMap& map) {
  if (!(f.spec() == map.spec())) {
    throw InvalidArgument("comparator and feature map use different kernels");
  }
  const int m = map.size();
  Eigen::VectorXd lifted(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i) lifted(i) = scale * f.Representer(map, i);
  return lifted;
}

}  // namespace hvawd
