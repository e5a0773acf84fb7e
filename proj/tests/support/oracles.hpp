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

// Reference computations that share no code with the library: brute-force
// membership tests, Monte Carlo areas and adaptive quadrature.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <utility>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

struct Vec {
  double x = 0.0;
  double y = 0.0;
};

/// True if a horizontal segment of length l centered at c touches the link
/// from the origin to p. Works in the frame of the blockage axis.
inline bool center_blocks(Vec c, double l, Vec p) {
  if (p.y == 0.0) return false;  // measure zero
  const double lo = std::min(0.0, p.y);
  const double hi = std::max(0.0, p.y);
  if (c.y < lo || c.y > hi) return false;
  const double x_on_link = p.x * c.y / p.y;
  return std::abs(c.x - x_on_link) <= 0.5 * l;
}

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// Monte Carlo area of the union of the blocking regions of two links.
inline Estimate mc_union_area(double l, double x, double phi, double t, double omega,
                              long samples, std::mt19937_64& rng) {
  const Vec a{x * std::cos(phi), x * std::sin(phi)};
  const Vec b{t * std::cos(omega), t * std::sin(omega)};
  const double lo_x = std::min({0.0, a.x, b.x}) - 0.5 * l;
  const double hi_x = std::max({0.0, a.x, b.x}) + 0.5 * l;
  const double lo_y = std::min({0.0, a.y, b.y});
  const double hi_y = std::max({0.0, a.y, b.y});
  const double box = (hi_x - lo_x) * (hi_y - lo_y);
  std::uniform_real_distribution<double> ux(lo_x, hi_x);
  std::uniform_real_distribution<double> uy(lo_y, hi_y);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const Vec c{ux(rng), uy(rng)};
    if (center_blocks(c, l, a) || center_blocks(c, l, b)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

/// Monte Carlo area of the same union, sampling centers uniformly inside
/// each blocking parallelogram in proportion to its area and weighting each
/// draw by one over the number of regions that contain it. The variance stays
/// small even when the regions are thin strips.
inline Estimate mc_union_area_mixture(double l, double x, double phi, double t, double omega,
                                      long samples, std::mt19937_64& rng) {
  const Vec a{x * std::cos(phi), x * std::sin(phi)};
  const Vec b{t * std::cos(omega), t * std::sin(omega)};
  const double area_a = l * std::abs(a.y);
  const double area_b = l * std::abs(b.y);
  const double total = area_a + area_b;
  if (!(total > 0.0)) return {0.0, 0.0};
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const Vec& p = u01(rng) * total < area_a ? a : b;
    const double u = u01(rng);
    const double v = u01(rng);
    const Vec c{-0.5 * l + u * l + v * p.x, v * p.y};
    const int cover = (center_blocks(c, l, a) ? 1 : 0) + (center_blocks(c, l, b) ? 1 : 0);
    const double w = cover > 0 ? 1.0 / cover : 1.0;
    sum += w;
    sum_sq += w * w;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {total * mean, total * std::sqrt(var / n)};
}

/// Adaptive Simpson quadrature to an absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 50) {
  struct Rec {
    static double run(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double diff = left + right - whole;
      if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
      return run(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::run(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Integral of f over [a, b] split into `pieces` adaptive sub-intervals.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol, int pieces = 16) {
  double acc = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    acc += adaptive_simpson(f, a + i * w, a + (i + 1) * w, tol / pieces);
  }
  return acc;
}

/// Overlap threshold a = k * Y of two same-side links, as derived from the
/// slice picture: Y = min(x|sin phi|, t|sin omega|), k = |sin(omega - phi)| /
/// (|sin phi| |sin omega|). Returns 0 when the links lie on opposite sides.
inline double overlap_threshold(double x, double phi, double t, double omega) {
  const double sp = std::sin(phi);
  const double so = std::sin(omega);
  if (sp * so <= 0.0) return 0.0;
  const double height = std::min(x * std::abs(sp), t * std::abs(so));
  const double shear = std::abs(std::sin(omega - phi)) / (std::abs(sp) * std::abs(so));
  return shear * height;
}

/// Empirical CDF of sorted samples at d, with n total trials.
template <class Vector>
double ecdf(const Vector& sorted, std::size_t n, double d) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), d);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(n);
}

}  // namespace oracle
