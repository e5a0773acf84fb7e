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
#include <stdexcept>
#include <string>

#include "blockgeom/distance_cdf.hpp"
#include "blockgeom/geometry.hpp"

namespace blockgeom {

/// Statistical description of the scenario: base-station and blockage-center
/// densities (per m^2), the uniform blockage-length law and the common
/// blockage orientation.
struct NetworkParams {
  double bs_density = 1e-4;
  double blockage_density = 1.9e-3;
  UniformLength length{0.0, 57.0};
  double orientation = 0.0;

  double mean_length() const noexcept { return length.mean(); }
  /// Mean blockers per meter of link crossing the blockage axis at a right
  /// angle: blockage_density * E[L].
  double blocker_intensity() const noexcept {
    return blockage_density * length.mean();
  }
  void validate() const;
};

struct HeightParams {
  double bs_height = 10.0;
  double user_height = 1.5;

  double min_distance() const noexcept { return bs_height - user_height; }
  void validate() const;
};

/// Tensor Gauss-Legendre settings for the correlated-pairs CDF.
///
/// `outer_x` nodes cover [0, d_max] in panels of at most 16 nodes;
/// `outer_phi` cover [0, pi/2]. The inner integral over the second link uses
/// `inner_omega` nodes per half turn and `inner_t` nodes over [0, x], both
/// split at the kinks of the pair integrand. Every result is recomputed with
/// all counts multiplied by `refinement`; the difference is the reported
/// error estimate and must stay below `tolerance`.
struct QuadratureSpec {
  std::size_t outer_x = 48;
  std::size_t outer_phi = 48;
  std::size_t inner_t = 48;
  std::size_t inner_omega = 48;
  double refinement = 2.0;
  double tolerance = 1e-3;

  QuadratureSpec refined() const;
  void validate() const;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Least-squares line sin(phi) ~ slope*phi + intercept on [0, pi/2] as used
/// by the closed-form single-link blockage probability.
inline constexpr double kSinFitSlope =
    (96.0 * kPi - 24.0) / (4.0 * kPi * kPi * kPi * kPi - 3.0 * kPi * kPi);
inline constexpr double kSinFitIntercept =
    (8.0 - kSinFitSlope * kPi * kPi) / (4.0 * kPi);

/// 1 - exp(-lambda_BS * pi * d^2).
double cdf_distance_noblockage(double d, const NetworkParams& p) noexcept;

/// Probability that a single base station dropped uniformly in the disk of
/// radius d is blocked, with sin linearized. Returns 0 for d <= 0.
double prob_blocked_single(double d, const NetworkParams& p) noexcept;

/// Upper bound on F_D(d) from independent blockage of every link.
double cdf_distance_independent(double d, const NetworkParams& p) noexcept;

/// P(LOS) of one link: exp(-lambda_b E[L] x |sin(phi)|).
double los_prob(double x, double phi, const NetworkParams& p) noexcept;

/// P(both links in LOS) = exp(-E[K_12]).
double pair_los_prob(double x, double phi, double t, double omega,
                     const NetworkParams& p) noexcept;

/// Density g(x, phi) of the closest visible base station in polar form with
/// pairwise correlation: P(no closer visible BS | LOS) * P(LOS) * x.
/// Throws ConvergenceError when refinement moves the value by more than
/// q.tolerance (relative).
double g_density(double x, double phi, const NetworkParams& p,
                 const QuadratureSpec& q = {});

/// Correlated-pairs approximation of F_D on `grid` (a lower bound in
/// practice). Values are clamped to [0, 1]; convergence is reported through
/// the returned flags rather than thrown.
DistanceCdf cdf_distance_correlated(std::span<const double> grid,
                                    const NetworkParams& p,
                                    const QuadratureSpec& q = {},
                                    unsigned threads = 1);

/// Same pipeline with the union area replaced by the sum of the two single
/// areas. Reproduces the independent bound without sin linearization.
DistanceCdf cdf_distance_area_bound(std::span<const double> grid,
                                    const NetworkParams& p,
                                    const QuadratureSpec& q = {},
                                    unsigned threads = 1);

/// The independent bound with the exact single-link blockage probability,
/// i.e. no sin linearization; a 1-D quadrature per distance.
double cdf_distance_independent_exact(double d, const NetworkParams& p);

/// Closed forms tabulated on a grid.
DistanceCdf tabulate_noblockage(std::span<const double> grid,
                                const NetworkParams& p);
DistanceCdf tabulate_independent(std::span<const double> grid,
                                 const NetworkParams& p);

/// Horizontal projection sqrt(d^2 - (H_BS - H_U)^2) of a 3-D distance.
/// Throws std::domain_error for d below H_BS - H_U.
double project_height(double d, const HeightParams& h);

/// 3-D distance CDF: 0 below H_BS - H_U, otherwise the chosen 2-D CDF at the
/// projected distance. `kind` must be an analytic kind.
DistanceCdf cdf_distance_with_height(std::span<const double> grid,
                                     const NetworkParams& p,
                                     const HeightParams& h, CdfKind kind,
                                     const QuadratureSpec& q = {},
                                     unsigned threads = 1);

}  // namespace blockgeom
