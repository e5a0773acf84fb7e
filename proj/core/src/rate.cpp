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

#include "blockgeom/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blockgeom/quadrature.hpp"

namespace blockgeom {

void RadioParams::validate() const {
  if (!(path_loss_exponent > 0.0) || !std::isfinite(path_loss_exponent)) {
    throw std::invalid_argument("path-loss exponent must be > 0");
  }
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_dbm) ||
      !std::isfinite(ref_loss_db)) {
    throw std::invalid_argument("radio levels must be finite");
  }
}

double RateCdf::operator()(double r) const noexcept {
  if (grid.empty()) return zero_rate_mass;
  if (r < 0.0) return 0.0;
  if (r < grid.front()) {
    if (grid.front() <= 0.0) return values.front();
    const double w = r / grid.front();
    return zero_rate_mass + w * (values.front() - zero_rate_mass);
  }
  if (r >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), r);
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (r - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

double snr_at_1m(const RadioParams& radio) noexcept {
  return std::pow(10.0,
                  (radio.tx_power_dbm - radio.noise_dbm - radio.ref_loss_db) /
                      10.0);
}

double rho() noexcept { return std::exp(-kEulerGamma); }

double rate_lower_bound(double d, double gamma, double alpha) {
  if (!(d > 0.0)) {
    throw std::domain_error("rate_lower_bound: distance must be > 0");
  }
  return std::log1p(gamma * rho() * std::pow(d, -alpha));
}

double inv_rate_lower_bound(double r, double gamma, double alpha) {
  if (!(r > 0.0)) {
    throw std::domain_error("inv_rate_lower_bound: rate must be > 0");
  }
  return std::pow(gamma * rho() / std::expm1(r), 1.0 / alpha);
}

namespace {

double e1_series(double z) {
  // E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -z / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

// Continued fraction for exp(z) E1(z), modified Lentz, valid for z > 1.
double scaled_e1_fraction(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double exponential_integral_e1(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("exponential_integral_e1: argument must be > 0");
  }
  if (z <= 1.0) return e1_series(z);
  return scaled_e1_fraction(z) * std::exp(-z);
}

double scaled_exponential_integral_e1(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error(
        "scaled_exponential_integral_e1: argument must be > 0");
  }
  if (z <= 1.0) return std::exp(z) * e1_series(z);
  return scaled_e1_fraction(z);
}

double ergodic_capacity_at_snr(double snr) {
  if (!(snr > 0.0)) return 0.0;
  if (!std::isfinite(snr)) return std::numeric_limits<double>::infinity();
  return scaled_exponential_integral_e1(1.0 / snr);
}

double ergodic_capacity(double d, double gamma, double alpha) {
  if (!(d > 0.0)) {
    throw std::domain_error("ergodic_capacity: distance must be > 0");
  }
  return ergodic_capacity_at_snr(gamma * std::pow(d, -alpha));
}

RateCdf cdf_rate_bound(std::span<const double> rate_grid,
                       const DistanceCdf& distance, double gamma,
                       double alpha) {
  RateCdf out;
  out.grid.assign(rate_grid.begin(), rate_grid.end());
  out.values.reserve(rate_grid.size());
  out.zero_rate_mass = distance.out_of_coverage_mass;
  for (const double r : rate_grid) {
    if (!(r > 0.0)) {
      throw std::domain_error("cdf_rate_bound: rates must be > 0");
    }
    const double d = inv_rate_lower_bound(r, gamma, alpha);
    out.values.push_back(std::clamp(1.0 - distance(d), 0.0, 1.0));
  }
  return out;
}

MeanRate mean_rate_from_cdf(const RateCdf& cdf) {
  MeanRate out;
  if (cdf.grid.empty()) return out;
  const auto& g = cdf.grid;
  const std::size_t n = g.size();
  double acc = 0.0;
  if (g.front() > 0.0) {
    acc += 0.5 * g.front() * ((1.0 - cdf.zero_rate_mass) + (1.0 - cdf.values.front()));
  }
  for (std::size_t i = 1; i < n; ++i) {
    acc += 0.5 * (g[i] - g[i - 1]) *
           ((1.0 - cdf.values[i - 1]) + (1.0 - cdf.values[i]));
  }
  const double s_last = 1.0 - cdf.values.back();
  if (s_last > 0.0) {
    double decay = 0.0;
    if (n >= 2) {
      const double s_prev = 1.0 - cdf.values[n - 2];
      if (s_prev > s_last) decay = std::log(s_prev / s_last) / (g[n - 1] - g[n - 2]);
    }
    if (decay > 0.0 && std::isfinite(decay)) {
      out.tail = s_last / decay;
    } else {
      // Flat survival at the end of the grid: no decay to extrapolate.
      out.tail = std::numeric_limits<double>::infinity();
    }
  }
  out.value = acc + out.tail;
  out.tail_warning = !std::isfinite(out.tail) || out.tail > 0.01 * out.value;
  return out;
}

double mean_rate_bound(const std::function<double(double)>& distance_cdf, double gamma,
                       double alpha) {
  if (!(gamma > 0.0)) return 0.0;
  const double r_hi = rate_lower_bound(1e-4, gamma, alpha);
  const GaussLegendre& gl = gauss_legendre(8);
  const auto panels = static_cast<std::size_t>(std::ceil(r_hi / 0.25));
  const double width = r_hi / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = width * static_cast<double>(k);
    acc += gl.integrate([&](double r) { return distance_cdf(inv_rate_lower_bound(r, gamma, alpha)); },
                        a, a + width);
  }
  return acc;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log_grid needs 0 < lo < hi");
  }
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace blockgeom
