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

#include <functional>
#include <span>
#include <vector>

#include "blockgeom/distance_cdf.hpp"

namespace blockgeom {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct RadioParams {
  double tx_power_dbm = 33.0;
  double noise_dbm = -104.0;
  double ref_loss_db = 25.6;
  double path_loss_exponent = 4.0;

  void validate() const;
};

/// CDF of a rate in nats per channel use, with the point mass at R = 0
/// carried separately.
struct RateCdf {
  std::vector<double> grid;
  std::vector<double> values;
  double zero_rate_mass = 0.0;

  /// P(R <= r). Linear between grid points; between 0 and grid[0] it
  /// interpolates from the zero-rate mass.
  double operator()(double r) const noexcept;
};

/// Linear SNR at 1 m: 10^((P_U - noise - L_ref) / 10).
double snr_at_1m(const RadioParams& radio) noexcept;

/// exp(-E[log|h|^2]) for unit-mean Rayleigh power, i.e. exp(-euler_gamma).
double rho() noexcept;

/// Jensen lower bound on the ergodic capacity: log(1 + gamma*rho*d^-alpha).
/// Throws std::domain_error for d <= 0.
double rate_lower_bound(double d, double gamma, double alpha);

/// Distance at which rate_lower_bound equals `r`. Throws std::domain_error
/// for r <= 0.
double inv_rate_lower_bound(double r, double gamma, double alpha);

/// E1(z) = integral_z^inf exp(-u)/u du. Throws std::domain_error for z <= 0.
double exponential_integral_e1(double z);

/// exp(z) * E1(z), evaluated without overflow for large z.
double scaled_exponential_integral_e1(double z);

/// E_h[log(1 + snr*|h|^2)] for |h|^2 ~ Exp(1).
double ergodic_capacity_at_snr(double snr);

/// Ergodic capacity at distance d with SNR gamma*d^-alpha. Throws
/// std::domain_error for d <= 0.
double ergodic_capacity(double d, double gamma, double alpha);

/// Rate-bound CDF 1 - F_D(v^-1(r)) on `rate_grid`. Distances past the end of
/// the distance grid take the last tabulated value, so the mass beyond it
/// behaves as out of coverage. Throws std::domain_error if the grid holds a
/// rate <= 0.
RateCdf cdf_rate_bound(std::span<const double> rate_grid,
                       const DistanceCdf& distance, double gamma, double alpha);

struct MeanRate {
  double value = 0.0;
  /// Contribution of the exponential tail beyond the last grid rate.
  double tail = 0.0;
  /// Set when the tail exceeds 1% of the total.
  bool tail_warning = false;
};

/// Integral of 1 - F(r) over r >= 0 by the trapezoid rule plus an
/// exponential tail estimate.
MeanRate mean_rate_from_cdf(const RateCdf& cdf);

/// Mean of the rate bound, integral over r > 0 of F_D(v^-1(r)), where
/// `distance_cdf` is any distance CDF (the out-of-coverage mass contributes
/// zero rate). Gauss-Legendre panels of 1/4 nat up to the rate of a link of
/// 0.1 mm.
double mean_rate_bound(const std::function<double(double)>& distance_cdf, double gamma,
                       double alpha);

/// Log-spaced grid of `n` rates over [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace blockgeom
