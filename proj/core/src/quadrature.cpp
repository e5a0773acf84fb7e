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

#include "blockgeom/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace blockgeom {

GaussLegendre::GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  // Newton iteration on P_n from the Chebyshev-like initial guess; symmetric
  // pairs are filled together.
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
    }
    dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

void GaussLegendre::map_to(double a, double b, std::vector<double>& nodes,
                           std::vector<double>& weights) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes.push_back(mid + half * nodes_[i]);
    weights.push_back(half * weights_[i]);
  }
}

const GaussLegendre& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendre>(n);
  return *slot;
}

BarycentricInterpolant::BarycentricInterpolant(std::span<const double> nodes,
                                               std::span<const double> values)
    : nodes_(nodes.begin(), nodes.end()),
      values_(values.begin(), values.end()),
      bary_(nodes.size(), 1.0) {
  if (nodes_.size() != values_.size() || nodes_.empty()) {
    throw std::invalid_argument("interpolant needs matching, non-empty data");
  }
  // Weights are rescaled by the interval length to avoid under/overflow for
  // large node counts.
  const double scale =
      4.0 / (nodes_.back() - nodes_.front() + (nodes_.size() == 1 ? 1.0 : 0.0));
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    double w = 1.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (k != j) w *= scale * (nodes_[j] - nodes_[k]);
    }
    bary_[j] = 1.0 / w;
  }
}

double BarycentricInterpolant::operator()(double x) const noexcept {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double diff = x - nodes_[j];
    if (diff == 0.0) return values_[j];
    const double c = bary_[j] / diff;
    num += c * values_[j];
    den += c;
  }
  return num / den;
}

}  // namespace blockgeom
