// Copyright 2026 The blockgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blockgeom {

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Integrates f over [a, b].
  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      acc += weights_[i] * f(mid + half * nodes_[i]);
    }
    return half * acc;
  }

  /// Nodes and weights mapped onto [a, b], appended to the output vectors.
  void map_to(double a, double b, std::vector<double>& nodes,
              std::vector<double>& weights) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Cached rule lookup. Thread-safe; rules live for the program lifetime.
const GaussLegendre& gauss_legendre(std::size_t n);

/// Barycentric Lagrange interpolation through (nodes, values).
class BarycentricInterpolant {
 public:
  BarycentricInterpolant(std::span<const double> nodes,
                         std::span<const double> values);

  double operator()(double x) const noexcept;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> bary_;
};

}  // namespace blockgeom
