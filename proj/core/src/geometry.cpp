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

#include "blockgeom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockgeom {
namespace {

// |sin| below this is treated as an exact zero (sin(pi) ~ 1.2e-16).
constexpr double kSinZero = 1e-15;

double cross(Point2 o, Point2 a, Point2 b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// p is known to be collinear with [a, b].
bool within_box(Point2 a, Point2 b, Point2 p) noexcept {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v) noexcept { return (v > 0.0) - (v < 0.0); }

// Shape of S1 ∩ S2 sliced along the blockage normal: at normal offset u in
// [0, height] the slices of the two regions are intervals of width l whose
// centers are `shear * u` apart.
struct OverlapShape {
  double shear = 0.0;
  double height = 0.0;
  bool any = false;
};

OverlapShape overlap_shape(double x, double phi, double t,
                           double omega) noexcept {
  const double s1 = std::sin(phi);
  const double s2 = std::sin(omega);
  if (x <= 0.0 || t <= 0.0 || std::abs(s1) < kSinZero ||
      std::abs(s2) < kSinZero || (s1 > 0.0) != (s2 > 0.0)) {
    return {};
  }
  OverlapShape shape;
  shape.any = true;
  shape.height = std::min(x * std::abs(s1), t * std::abs(s2));
  shape.shear = std::abs(std::sin(omega - phi)) / (std::abs(s1) * std::abs(s2));
  return shape;
}

double overlap_area(double l, const OverlapShape& shape) noexcept {
  if (!shape.any || l <= 0.0) return 0.0;
  const double a = shape.shear * shape.height;
  if (l < a) {
    // Slices stop overlapping at u = l / shear, below the common height.
    return 0.5 * l * l / shape.shear;
  }
  return l * shape.height - 0.5 * shape.shear * shape.height * shape.height;
}

}  // namespace

Point2 Blockage::endpoint_a() const noexcept {
  const double h = 0.5 * length;
  return {center.x - h * std::cos(orientation),
          center.y - h * std::sin(orientation)};
}

Point2 Blockage::endpoint_b() const noexcept {
  const double h = 0.5 * length;
  return {center.x + h * std::cos(orientation),
          center.y + h * std::sin(orientation)};
}

Point2 PolarLink::endpoint(double axis) const noexcept {
  const double a = azimuth + axis;
  return {dist * std::cos(a), dist * std::sin(a)};
}

double UniformLength::second_moment() const noexcept {
  return (max * max + max * min + min * min) / 3.0;
}

double UniformLength::third_moment() const noexcept {
  return (max + min) * (max * max + min * min) / 4.0;
}

void UniformLength::validate() const {
  if (!(std::isfinite(min) && std::isfinite(max))) {
    throw std::invalid_argument("blockage length bounds must be finite");
  }
  if (min < 0.0) {
    throw std::invalid_argument("blockage length minimum must be >= 0");
  }
  if (!(min < max)) {
    throw std::invalid_argument(
        "blockage length minimum must be below the maximum");
  }
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 p3, Point2 p4) noexcept {
  const int d1 = sign(cross(p3, p4, p1));
  const int d2 = sign(cross(p3, p4, p2));
  const int d3 = sign(cross(p1, p2, p3));
  const int d4 = sign(cross(p1, p2, p4));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && within_box(p3, p4, p1)) return true;
  if (d2 == 0 && within_box(p3, p4, p2)) return true;
  if (d3 == 0 && within_box(p1, p2, p3)) return true;
  if (d4 == 0 && within_box(p1, p2, p4)) return true;
  return false;
}

bool intersects(Point2 p1, Point2 p2, const Blockage& blockage) noexcept {
  return segments_intersect(p1, p2, blockage.endpoint_a(), blockage.endpoint_b());
}

bool intersects(const PolarLink& link, const Blockage& blockage,
                double axis) noexcept {
  return intersects(Point2{0.0, 0.0}, link.endpoint(axis), blockage);
}

double blocking_region_area(double l, double x, double phi) noexcept {
  return x * l * std::abs(std::sin(phi));
}

double union_area(double l, double x, double phi, double t,
                  double omega) noexcept {
  const double sum =
      blocking_region_area(l, x, phi) + blocking_region_area(l, t, omega);
  return sum - overlap_area(l, overlap_shape(x, phi, t, omega));
}

double wrap_angle(double angle) noexcept {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

FoldedAngles fold_symmetry(double phi, double omega) noexcept {
  double p = wrap_angle(phi);
  double o = wrap_angle(omega);
  if (p > kPi) {
    // Reflection about the blockage axis.
    p = kTwoPi - p;
    o = wrap_angle(kTwoPi - o);
  }
  if (p > 0.5 * kPi) {
    // Reflection about the normal.
    p = kPi - p;
    o = wrap_angle(kPi - o);
  }
  return {p, o};
}

double expected_blockers_single(double x, double phi, double blockage_density,
                                double mean_length) noexcept {
  return blockage_density * mean_length * x * std::abs(std::sin(phi));
}

double expected_overlap_sliced(double shear, double height,
                               const UniformLength& length) noexcept {
  if (!(height > 0.0)) return 0.0;
  const double lo = length.min;
  const double hi = length.max;
  const double k = shear;
  const double y = height;
  const double a = k * y;
  const double c = std::clamp(a, lo, hi);
  double acc = 0.0;
  if (c - lo > kLengthTolerance) {
    acc += (c * c * c - lo * lo * lo) / (6.0 * k);
  }
  if (hi - c > kLengthTolerance) {
    acc += 0.5 * y * (hi * hi - c * c) - 0.5 * k * y * y * (hi - c);
  }
  return acc / (hi - lo);
}

double expected_overlap_area(double x, double phi, double t, double omega,
                             const UniformLength& length) noexcept {
  const OverlapShape shape = overlap_shape(x, phi, t, omega);
  if (!shape.any) return 0.0;
  return expected_overlap_sliced(shape.shear, shape.height, length);
}

double expected_blockers_pair(double x, double phi, double t, double omega,
                              double blockage_density,
                              const UniformLength& length) noexcept {
  const double mean = length.mean();
  const double singles = mean * (x * std::abs(std::sin(phi)) +
                                 t * std::abs(std::sin(omega)));
  return blockage_density *
         (singles - expected_overlap_area(x, phi, t, omega, length));
}

}  // namespace blockgeom
