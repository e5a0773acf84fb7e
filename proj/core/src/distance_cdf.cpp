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

#include "blockgeom/distance_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockgeom {

std::string_view to_string(CdfKind kind) noexcept {
  switch (kind) {
    case CdfKind::no_blockage: return "no_blockage";
    case CdfKind::independent_bound: return "independent_bound";
    case CdfKind::correlated_approx: return "correlated_approx";
    case CdfKind::empirical: return "empirical";
    case CdfKind::area_bound_quadrature: return "area_bound_quadrature";
  }
  return "unknown";
}

double DistanceCdf::operator()(double d) const noexcept {
  if (grid.empty() || d < grid.front()) return 0.0;
  if (d >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), d);
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double span = grid[hi] - grid[lo];
  if (span <= 0.0) return values[hi];
  const double w = (d - grid[lo]) / span;
  return values[lo] + w * (values[hi] - values[lo]);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

void validate_distance_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("distance grid is empty");
  if (!(grid.front() >= 0.0)) {
    throw std::invalid_argument("distance grid must start at >= 0");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw std::invalid_argument("distance grid must be finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("distance grid must be strictly ascending");
    }
  }
}

}  // namespace blockgeom
