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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blockgeom/analytic.hpp"
#include "blockgeom/distance_cdf.hpp"
#include "blockgeom/geometry.hpp"
#include "blockgeom/rate.hpp"

namespace blockgeom {

/// Finite realization window: base stations live in the disk of `radius`
/// around the user, blockage centers in the disk of radius + margin.
struct SimWindow {
  double radius = 1000.0;
  double margin = 28.5;

  /// Window of `radius` whose margin is half the longest blockage.
  static SimWindow for_params(const NetworkParams& p, double radius = 1000.0);
  /// Throws std::invalid_argument unless radius > 0 and margin >= L_max / 2.
  void validate(const NetworkParams& p) const;
};

struct Layout {
  std::vector<Point2> bs_positions;
  std::vector<Blockage> blockages;
  SimWindow window;
  std::uint64_t seed = 0;
};

/// Samples of a distance or rate: sorted finite values plus the count of
/// censored realizations (no visible base station inside the window).
struct EmpiricalDistribution {
  std::vector<double> samples;
  std::size_t censored_count = 0;

  std::size_t trials() const noexcept { return samples.size() + censored_count; }
};

/// Uniform-grid spatial index over a fixed set of blockage segments.
class BlockageIndex {
 public:
  explicit BlockageIndex(std::span<const Blockage> blockages, double cell = 20.0);

  /// True if any blockage intersects the closed segment [a, b].
  bool blocked(Point2 a, Point2 b) const noexcept;

  std::size_t size() const noexcept { return items_.size(); }

 private:
  std::vector<Blockage> items_;
  std::vector<std::uint32_t> start_;
  double x0_ = 0.0;
  double y0_ = 0.0;
  double cell_ = 20.0;
  long nx_ = 0;
  long ny_ = 0;
  double reach_x_ = 0.0;
  double reach_y_ = 0.0;
};

/// Sides (meters) of the square cells that carry independent blockage and
/// base-station streams. Part of the definition of a layout realization.
inline constexpr double kFieldCell = 20.0;
inline constexpr double kBaseStationCell = 100.0;

/// Blockage PPP of one layout, materialized cell by cell on demand.
///
/// The plane is tiled by kFieldCell squares anchored at the user; cell
/// (i, j) draws Poisson(lambda_b * cell^2) centers from its own Philox
/// stream of the seed, and only centers inside the margin-inflated disk are
/// kept. The content of a cell depends on (params, seed, i, j) alone, so
/// lazily visiting a few cells gives exactly the blockages a full
/// materialization would, and a larger window only adds blockages.
class BlockageField {
 public:
  BlockageField(const NetworkParams& p, const SimWindow& w, std::uint64_t seed);

  /// True if any blockage of the field intersects the closed segment [a, b].
  bool blocked(Point2 a, Point2 b);

  /// Every blockage, cell by cell in row-major order.
  std::vector<Blockage> materialize();

 private:
  std::span<const Blockage> cell(long col, long row);

  NetworkParams params_;
  std::uint64_t seed_;
  double outer_radius_;
  double origin_;
  long half_cells_;
  long cells_per_side_;
  double cell_mean_;
  double exp_neg_mean_;
  double reach_x_;
  double reach_y_;
  std::vector<Blockage> arena_;
  std::vector<std::int32_t> begin_;
  std::vector<std::int32_t> count_;
};

/// One PPP draw: Poisson(lambda_BS pi r^2) base stations uniform in the
/// disk, Poisson blockage centers over the margin-inflated disk with
/// i.i.d. U[L_min, L_max] lengths. Both processes are drawn cell by cell
/// (see BlockageField), so identical inputs give identical layouts and
/// windows of different radius share every point they have in common.
Layout gen_layout(const NetworkParams& p, const SimWindow& w, std::uint64_t seed);

/// Distance from the origin to the closest base station whose link crosses
/// no blockage; nullopt when every base station is blocked or none exists.
std::optional<double> nearest_visible_distance(const Layout& layout);

/// Base stations of the layout seeded with `seed`, as in gen_layout.
std::vector<Point2> generate_base_stations(const NetworkParams& p,
                                           const SimWindow& w,
                                           std::uint64_t seed);

/// nearest_visible_distance(gen_layout(p, w, seed)) without materializing
/// the blockages that no tested link can reach.
std::optional<double> nearest_visible_distance(const NetworkParams& p,
                                               const SimWindow& w,
                                               std::uint64_t seed);

/// Seed of trial `trial` in a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept;

struct SimOptions {
  /// When set, distances are measured in 3-D between a user at H_U and base
  /// stations at H_BS. Visibility is still decided in the plane.
  std::optional<HeightParams> heights;
  unsigned threads = 1;
};

/// Closest-visible distances over `trials` independent layouts.
EmpiricalDistribution empirical_distance_samples(const NetworkParams& p,
                                                 const SimWindow& w,
                                                 std::size_t trials,
                                                 std::uint64_t seed,
                                                 const SimOptions& options = {});

/// Empirical CDF of a distance sample on `grid`; censored realizations form
/// the out-of-coverage mass.
DistanceCdf empirical_cdf(const EmpiricalDistribution& dist,
                          std::span<const double> grid);

/// Empirical F_D on the default grid: 512 points over [0, w.radius].
DistanceCdf empirical_cdf_distance(const NetworkParams& p, const SimWindow& w,
                                   std::size_t trials, std::uint64_t seed,
                                   const SimOptions& options = {});

/// Exact ergodic capacity at every sampled distance; censored realizations
/// carry rate 0.
EmpiricalDistribution rates_from_distances(const EmpiricalDistribution& distances,
                                           const RadioParams& radio);

EmpiricalDistribution empirical_rate_samples(const NetworkParams& p,
                                             const SimWindow& w,
                                             const RadioParams& radio,
                                             std::size_t trials,
                                             std::uint64_t seed,
                                             const SimOptions& options = {});

/// Empirical rate CDF on `grid` (censored mass sits at R = 0).
RateCdf empirical_rate_cdf(const EmpiricalDistribution& rates,
                           std::span<const double> grid);

/// Sample mean with censored realizations counted as zero.
double empirical_mean(const EmpiricalDistribution& dist) noexcept;

/// Largest absolute difference between two CDFs over the union of their
/// grids.
double ks_distance(const DistanceCdf& a, const DistanceCdf& b);

}  // namespace blockgeom
