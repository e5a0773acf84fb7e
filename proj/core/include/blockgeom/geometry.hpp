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

#include <numbers>

namespace blockgeom {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Absolute tolerance (meters) used when comparing branch thresholds.
inline constexpr double kLengthTolerance = 1e-12;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

/// A blocking element modeled as a line segment.
///
/// `orientation` is the direction of the segment in radians. In the
/// parallel model every blockage of a layout carries the same value.
struct Blockage {
  Point2 center;
  double length = 0.0;
  double orientation = 0.0;

  Point2 endpoint_a() const noexcept;
  Point2 endpoint_b() const noexcept;

  friend constexpr bool operator==(const Blockage&, const Blockage&) = default;
};

/// A link from the reference user at the origin, in polar form. The azimuth
/// is measured from the blockage axis, not from the global x axis.
struct PolarLink {
  double dist = 0.0;
  double azimuth = 0.0;

  /// End point of the link for blockages oriented at `axis`.
  Point2 endpoint(double axis = 0.0) const noexcept;
};

/// Uniform blockage-length law L ~ U[min, max].
struct UniformLength {
  double min = 0.0;
  double max = 0.0;

  double mean() const noexcept { return 0.5 * (min + max); }
  /// E[L^2] and E[L^3].
  double second_moment() const noexcept;
  double third_moment() const noexcept;
  /// Throws std::invalid_argument unless 0 <= min < max.
  void validate() const;
};

/// True iff the closed segments [p1, p2] and [p3, p4] share a point.
bool segments_intersect(Point2 p1, Point2 p2, Point2 p3, Point2 p4) noexcept;

/// True iff the closed segments [a, b] and the blockage share at least one
/// point. Collinear overlap counts as an intersection.
bool intersects(Point2 a, Point2 b, const Blockage& blockage) noexcept;

/// Link from the origin to `link.endpoint(axis)` against `blockage`.
bool intersects(const PolarLink& link, const Blockage& blockage,
                double axis = 0.0) noexcept;

/// Area of the parallelogram of blockage centers (length `l`) that block a
/// link of length `x` at azimuth `phi`: x * l * |sin(phi)|.
double blocking_region_area(double l, double x, double phi) noexcept;

/// Exact area of the union of the blocking regions of two links from the
/// origin, (x, phi) and (t, omega), for blockages of length `l`.
///
/// The overlap of the two parallelograms is integrated slice by slice along
/// the blockage normal. The overlap collapses to the three-branch closed form
/// whenever t|sin(omega)| <= x|sin(phi)|; outside that regime the common height
/// of the two regions is min(x|sin(phi)|, t|sin(omega)|). Accepts any angles;
/// the result is invariant under fold_symmetry.
double union_area(double l, double x, double phi, double t,
                  double omega) noexcept;

struct FoldedAngles {
  double phi = 0.0;    // in [0, pi/2]
  double omega = 0.0;  // in [0, 2pi)
};

/// Reflects a two-link configuration about the blockage axis and/or its
/// normal so that phi lands in [0, pi/2]. Both reflections preserve the
/// union area.
FoldedAngles fold_symmetry(double phi, double omega) noexcept;

/// Reduces an angle to [0, 2pi).
double wrap_angle(double angle) noexcept;

/// Mean number of blockages of any length intersecting a single link.
double expected_blockers_single(double x, double phi, double blockage_density,
                                double mean_length) noexcept;

/// Mean number of blockages intersecting at least one of two links, for
/// L ~ U[length.min, length.max].
double expected_blockers_pair(double x, double phi, double t, double omega,
                              double blockage_density,
                              const UniformLength& length) noexcept;

/// Expected overlap area E[|S1 ∩ S2|] over the length law. Together with the
/// single-link terms this is the whole of expected_blockers_pair.
double expected_overlap_area(double x, double phi, double t, double omega,
                             const UniformLength& length) noexcept;

/// Expected overlap for a known overlap shape: the two regions share the
/// normal-offset range [0, height] and their slice centers drift apart by
/// `shear` per meter of offset. Lengths below a = shear * height give the
/// triangular overlap l^2 / (2 shear); longer ones overlap over the whole
/// common height.
double expected_overlap_sliced(double shear, double height,
                               const UniformLength& length) noexcept;

}  // namespace blockgeom
