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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockgeom/analytic.hpp"
#include "blockgeom/geometry.hpp"
#include "blockgeom/rate.hpp"
#include "blockgeom/simulate.hpp"

namespace blockgeom {

/// Malformed layout input. The message names the offending ring or line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinates that are not planar meters (geographic or 3-D).
class UnitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultCorrectionFactor = 1.7;

/// Edges farther than this from both snapping directions raise a warning.
inline constexpr double kSnapWarningAngle = 10.0 * kPi / 180.0;

enum class LayoutFormat { json_polygons, csv_segments };

/// Parses "json-polygons" or "csv-segments" ("csv-edges" is accepted as an
/// alias). Throws std::invalid_argument otherwise.
LayoutFormat parse_layout_format(std::string_view name);

struct BoundingBox {
  Point2 lo;
  Point2 hi;

  double width() const noexcept { return hi.x - lo.x; }
  double height() const noexcept { return hi.y - lo.y; }
  double area() const noexcept { return width() * height(); }
};

using Ring = std::vector<Point2>;

/// Building footprints in planar meters. Rings are stored open (the closing
/// vertex is not repeated). Layouts read from a segment file carry their
/// blockages in `segments` and no polygons.
struct BuildingLayout {
  std::vector<Ring> polygons;
  std::vector<Blockage> segments;
  BoundingBox bbox;
  std::vector<std::string> warnings;

  /// Polygons plus precomputed segments: the units subsample draws from.
  std::size_t item_count() const noexcept { return polygons.size() + segments.size(); }
};

/// Absolute shoelace area of a ring.
double ring_area(std::span<const Point2> ring) noexcept;

/// True if no two non-adjacent edges of the ring touch.
bool ring_is_simple(std::span<const Point2> ring) noexcept;

/// Even-odd point-in-polygon test.
bool point_in_ring(Point2 p, std::span<const Point2> ring) noexcept;

/// Polygon file: a top-level array of rings, each an array of at least three
/// [x, y] pairs in meters. An object {"units": "m", "polygons": [...]} is
/// also accepted; any unit other than meters is a UnitError. The object form
/// may carry "bbox": [[xmin, ymin], [xmax, ymax]] to fix the study region,
/// otherwise the region is the extent of the vertices. Collinear rings are
/// kept with a warning; self-intersecting rings are a ParseError.
BuildingLayout parse_polygons_json(std::string_view text);

/// Segment file: one "cx,cy,length,orientation_radians" per line; blank
/// lines and '#' comments are ignored.
BuildingLayout parse_segments_csv(std::string_view text);

/// Reads and parses a layout file. Throws ParseError if the file cannot be
/// read or is empty.
BuildingLayout load_layout(const std::filesystem::path& path, LayoutFormat format);

/// Serializes the layout in the object form, units and bbox included.
std::string polygons_to_json(const BuildingLayout& layout);

/// Recomputes the bounding box of all polygons and segments.
BoundingBox compute_bbox(const BuildingLayout& layout) noexcept;

struct DirectionSummary {
  std::size_t count = 0;
  double mean_length = 0.0;
};

enum class OrientationFilter {
  axis,           // segments snapped to `axis`
  perpendicular,  // segments snapped to axis + pi/2
  all,
};

/// Blockage segments with the region they cover. `direction[0]` summarizes
/// the segments snapped to the axis, `direction[1]` the perpendicular ones.
struct SegmentSet {
  std::vector<Blockage> segments;
  double region_area = 0.0;
  double axis = 0.0;
  double correction_factor = kDefaultCorrectionFactor;
  std::array<DirectionSummary, 2> direction{};
  std::vector<std::string> warnings;
};

/// Builds a SegmentSet from raw blockages, snapping every orientation to
/// `axis` or axis + pi/2.
SegmentSet make_segment_set(std::vector<Blockage> blockages, double region_area,
                            double axis,
                            double correction_factor = kDefaultCorrectionFactor);

/// Turns every polygon edge into a blockage at the edge midpoint with the
/// edge length, its orientation snapped to the nearer of {axis, axis + pi/2}.
/// Precomputed segments are snapped the same way. The region is the layout
/// bounding box.
SegmentSet polygons_to_segments(const BuildingLayout& layout, double axis,
                                double correction_factor = kDefaultCorrectionFactor);

struct BlockageStats {
  double blockage_density = 0.0;
  double mean_length = 0.0;
  std::size_t count = 0;
};

/// lambda_b = correction_factor * count / area and the mean length of the
/// filtered segments. Throws std::domain_error for a non-positive area or
/// when no segment passes the filter.
BlockageStats estimate_stats(const SegmentSet& set,
                             OrientationFilter filter = OrientationFilter::axis);

/// Keeps each polygon (and each precomputed segment) independently with
/// probability `fraction`. Item i uses Philox stream i of `seed`, so the
/// result depends only on (layout, fraction, seed).
BuildingLayout subsample(const BuildingLayout& layout, double fraction,
                         std::uint64_t seed);

/// Synthetic "Manhattan" layout: square blocks separated by streets, each
/// block split into lots_per_side^2 lots holding one rectangular building
/// set back from the lot edges by a random amount in [0, max_setback].
struct ManhattanSpec {
  double extent = 2000.0;
  double block = 100.0;
  double street = 20.0;
  int lots_per_side = 2;
  double max_setback = 4.0;
  std::uint64_t seed = 7;

  void validate() const;
};

BuildingLayout manhattan_grid(const ManhattanSpec& spec);

/// Single-orientation synthetic model matching the measured statistics:
/// density from `stats`, L ~ U[0, 2 * mean_length], orientation `axis`.
NetworkParams synthetic_params(const BlockageStats& stats, double bs_density,
                               double axis);

/// Monte Carlo over a fixed layout. Each trial drops the user uniformly in
/// the bounding box shrunk by `radius` (re-drawing points inside
/// buildings), draws a PPP of base stations in the disk of `radius` around
/// the user and records the distance to the closest one not blocked by any
/// segment of `set`.
EmpiricalDistribution ingested_distance_samples(const BuildingLayout& layout,
                                                const SegmentSet& set,
                                                double bs_density, double radius,
                                                std::size_t trials,
                                                std::uint64_t seed,
                                                unsigned threads = 1);

struct Calibration {
  double correction_factor = 0.0;
  double target_mean_rate = 0.0;
  double synthetic_mean_rate = 0.0;
  int iterations = 0;
};

/// Bisects the correction factor in [lo, hi] until the synthetic-model mean
/// rate matches `target_mean_rate`. Every evaluation reuses the same trial
/// seeds, which makes the synthetic mean rate monotone in the factor.
/// `set` supplies the raw axis-family statistics; its own factor is ignored.
Calibration calibrate_correction_factor(const SegmentSet& set, double target_mean_rate,
                                        double bs_density, const RadioParams& radio,
                                        double radius, std::size_t trials,
                                        std::uint64_t seed, unsigned threads = 1,
                                        double lo = 0.25, double hi = 8.0,
                                        double tolerance = 1e-3);

}  // namespace blockgeom
