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

#include <span>
#include <string_view>
#include <vector>

namespace blockgeom {

enum class CdfKind {
  no_blockage,
  independent_bound,
  correlated_approx,
  empirical,
  area_bound_quadrature,
};

std::string_view to_string(CdfKind kind) noexcept;

/// A CDF of the distance to the closest visible base station tabulated on an
/// ascending grid of distances (meters).
///
/// `out_of_coverage_mass` is the residual 1 - F(grid.back()): the mass of
/// realizations with no visible base station within the tabulated range.
struct DistanceCdf {
  std::vector<double> grid;
  std::vector<double> values;
  double out_of_coverage_mass = 0.0;
  CdfKind kind = CdfKind::empirical;

  /// Quadrature bookkeeping; always converged for closed forms and
  /// empirical curves.
  bool converged = true;
  double quadrature_error = 0.0;
  /// Set when a value had to be clamped into [0, 1].
  bool clamped = false;

  /// Piecewise-linear interpolation; 0 left of the grid, the last value to
  /// its right.
  double operator()(double d) const noexcept;
};

/// `n` uniform points over [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Throws std::invalid_argument unless the grid is non-empty, finite,
/// ascending and starts at >= 0.
void validate_distance_grid(std::span<const double> grid);

}  // namespace blockgeom
