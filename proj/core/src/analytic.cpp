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

#include "blockgeom/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "blockgeom/parallel.hpp"
#include "blockgeom/quadrature.hpp"

namespace blockgeom {

void NetworkParams::validate() const {
  if (!(bs_density >= 0.0) || !std::isfinite(bs_density)) {
    throw std::invalid_argument("network.bs_density must be >= 0");
  }
  if (!(blockage_density >= 0.0) || !std::isfinite(blockage_density)) {
    throw std::invalid_argument("network.blockage_density must be >= 0");
  }
  length.validate();
  if (!std::isfinite(orientation)) {
    throw std::invalid_argument("network.orientation must be finite");
  }
}

void HeightParams::validate() const {
  if (!(user_height >= 0.0)) {
    throw std::invalid_argument("heights.user must be >= 0");
  }
  if (!(bs_height > user_height)) {
    throw std::invalid_argument("heights.bs must exceed heights.user");
  }
}

QuadratureSpec QuadratureSpec::refined() const {
  auto scale = [this](std::size_t n) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * refinement));
  };
  QuadratureSpec r = *this;
  r.outer_x = scale(outer_x);
  r.outer_phi = scale(outer_phi);
  r.inner_t = scale(inner_t);
  r.inner_omega = scale(inner_omega);
  return r;
}

void QuadratureSpec::validate() const {
  if (outer_x < 8 || outer_phi < 8 || inner_t < 8 || inner_omega < 8) {
    throw std::invalid_argument("quadrature node counts must be >= 8");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("quadrature.tolerance must be > 0");
  }
  if (!(refinement > 1.0)) {
    throw std::invalid_argument("quadrature.refinement must be > 1");
  }
}

double cdf_distance_noblockage(double d, const NetworkParams& p) noexcept {
  return -std::expm1(-p.bs_density * kPi * d * d);
}

double prob_blocked_single(double d, const NetworkParams& p) noexcept {
  const double u = p.blocker_intensity() * d;
  if (!(u > 0.0)) return 0.0;
  const double m = kSinFitSlope;
  const double n = kSinFitIntercept;
  const double s = n + 0.5 * m * kPi;
  if (u < 1.0) {
    // Power series of the same expression; the closed form cancels badly
    // for small u.
    double sum = 0.0;
    double upow = 1.0;
    double fact = 1.0;
    double spow = s;
    double npow = n;
    for (int k = 1; k < 60; ++k) {
      upow *= u;
      fact *= k;
      spow *= s;
      npow *= n;
      const double term = upow * (spow - npow) / (m * (k + 1.0) * fact * (k + 2.0));
      sum += (k % 2 == 1) ? term : -term;
      if (term < 1e-18 * std::abs(sum)) break;
    }
    return std::clamp(4.0 / kPi * sum, 0.0, 1.0);
  }
  const double bracket =
      0.5 * m * kPi + n * std::exp(-u * s) - s * std::exp(-u * n);
  const double prob = 1.0 - 4.0 / (kPi * u * u * m * n * s) * bracket;
  return std::clamp(prob, 0.0, 1.0);
}

double cdf_distance_independent(double d, const NetworkParams& p) noexcept {
  if (!(d > 0.0)) return 0.0;
  const double visible = 1.0 - prob_blocked_single(d, p);
  return -std::expm1(-p.bs_density * kPi * d * d * visible);
}

double los_prob(double x, double phi, const NetworkParams& p) noexcept {
  return std::exp(-expected_blockers_single(x, phi, p.blockage_density,
                                            p.mean_length()));
}

double pair_los_prob(double x, double phi, double t, double omega,
                     const NetworkParams& p) noexcept {
  return std::exp(-expected_blockers_pair(x, phi, t, omega, p.blockage_density,
                                          p.length));
}

namespace {

enum class PairModel { exact_union, area_bound };

// (1 - exp(-v)(1 + v)) / v^2, i.e. integral_0^1 y exp(-v y) dy.
double radial_kernel(double v) noexcept {
  if (v < 1e-3) return 0.5 - v / 3.0 + v * v / 8.0 - v * v * v / 30.0;
  return (-std::expm1(-v) - v * std::exp(-v)) / (v * v);
}

std::size_t share(std::size_t total, double part, double whole) {
  const auto n = static_cast<std::size_t>(
      std::lround(static_cast<double>(total) * part / whole));
  return std::max<std::size_t>(8, n);
}

// Integrals over the second link (t, omega) for a reference link (x, phi)
// with phi in [0, pi/2].
class PairIntegrator {
 public:
  PairIntegrator(const NetworkParams& p, const QuadratureSpec& q,
                 PairModel model)
      : p_(p), q_(q), model_(model), beta_(p.blocker_intensity()) {}

  // Lower half-turn omega in (pi, 2pi): the second region sits across the
  // blockage axis and never overlaps the first, so this part is
  // independent of phi.
  double opposite_half(double x) const {
    const GaussLegendre& rw = gauss_legendre(q_.inner_omega);
    const GaussLegendre& rt = gauss_legendre(q_.inner_t);
    return rw.integrate(
        [&](double omega) {
          const double s2 = std::abs(std::sin(omega));
          return rt.integrate(
              [&](double t) { return t * std::exp(-beta_ * t * s2); }, 0.0, x);
        },
        kPi, kTwoPi);
  }

  // Upper half-turn omega in [0, pi], where the two regions may overlap.
  double same_half(double x, double phi) const {
    const double s1 = std::sin(phi);
    double cuts[4] = {0.0, phi, kPi - phi, kPi};
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double a = cuts[i];
      const double b = cuts[i + 1];
      if (!(b - a > 1e-14)) continue;
      const GaussLegendre& rw = gauss_legendre(share(q_.inner_omega, b - a, kPi));
      acc += rw.integrate([&](double omega) { return over_t(x, s1, phi, omega); },
                          a, b);
    }
    return acc;
  }

 private:
  double over_t(double x, double s1, double phi, double omega) const {
    const double s2 = std::sin(omega);
    const bool overlap = model_ == PairModel::exact_union && s1 > 0.0 && s2 > 0.0;
    double shear = 0.0;
    double breaks[5];
    int nb = 0;
    breaks[nb++] = 0.0;
    if (overlap) {
      shear = std::abs(std::sin(omega - phi)) / (s1 * s2);
      // Common height switches from t*s2 to x*s1 at t1; before t1 the length
      // threshold a = shear * t * s2 crosses L_min and L_max.
      const double t1 = x * s1 / s2;
      const double upto = std::min(t1, x);
      if (shear > 0.0) {
        for (const double len : {p_.length.min, p_.length.max}) {
          const double tb = len / (shear * s2);
          if (tb > 0.0 && tb < upto) breaks[nb++] = tb;
        }
      }
      if (t1 < x) breaks[nb++] = t1;
    }
    breaks[nb++] = x;
    std::sort(breaks, breaks + nb);

    const double lambda_b = p_.blockage_density;
    const double cap = x * s1;
    auto integrand = [&](double t) {
      double excess = beta_ * t * std::abs(s2);
      if (overlap) {
        excess -= lambda_b * expected_overlap_sliced(shear, std::min(cap, t * s2),
                                                     p_.length);
      }
      return t * std::exp(-excess);
    };
    double acc = 0.0;
    for (int i = 0; i + 1 < nb; ++i) {
      const double a = breaks[i];
      const double b = breaks[i + 1];
      if (!(b - a > 1e-12)) continue;
      const GaussLegendre& rt = gauss_legendre(share(q_.inner_t, b - a, x));
      acc += rt.integrate(integrand, a, b);
    }
    return acc;
  }

  const NetworkParams& p_;
  const QuadratureSpec& q_;
  PairModel model_;
  double beta_;
};

double g_value(double x, double phi, double opposite, const PairIntegrator& pi,
               const NetworkParams& p) {
  if (!(x > 0.0)) return 0.0;
  const double inner = opposite + pi.same_half(x, phi);
  return x * std::exp(-p.blocker_intensity() * x * std::sin(phi) -
                      p.bs_density * inner);
}

// One pass of the cumulative outer quadrature at a fixed QuadratureSpec.
std::vector<double> cumulative_pass(std::span<const double> grid,
                                    const NetworkParams& p,
                                    const QuadratureSpec& q, PairModel model,
                                    unsigned threads) {
  std::vector<double> out(grid.size(), 0.0);
  const double d_max = grid.back();
  if (!(d_max > 0.0) || p.bs_density == 0.0) return out;

  const std::size_t panels = (q.outer_x + 15) / 16;
  const std::size_t per_panel = (q.outer_x + panels - 1) / panels;
  const GaussLegendre& rx = gauss_legendre(per_panel);
  const GaussLegendre& rphi = gauss_legendre(q.outer_phi);
  const double width = d_max / static_cast<double>(panels);

  std::vector<double> xs;
  std::vector<double> wx;
  for (std::size_t k = 0; k < panels; ++k) {
    rx.map_to(width * k, width * (k + 1), xs, wx);
  }
  std::vector<double> phis;
  std::vector<double> wphi;
  rphi.map_to(0.0, 0.5 * kPi, phis, wphi);

  // h(x) = 4 lambda_BS integral_0^{pi/2} g(x, phi) dphi at every x node.
  const PairIntegrator integrator(p, q, model);
  std::vector<double> h(xs.size(), 0.0);
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const double x = xs[i];
    const double opposite = integrator.opposite_half(x);
    double acc = 0.0;
    for (std::size_t j = 0; j < phis.size(); ++j) {
      acc += wphi[j] * g_value(x, phis[j], opposite, integrator, p);
    }
    h[i] = 4.0 * p.bs_density * acc;
  });

  std::vector<double> panel_start(panels + 1, 0.0);
  for (std::size_t k = 0; k < panels; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < per_panel; ++i) {
      acc += wx[k * per_panel + i] * h[k * per_panel + i];
    }
    panel_start[k + 1] = panel_start[k] + acc;
  }

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double d = grid[gi];
    if (!(d > 0.0)) continue;
    auto k = static_cast<std::size_t>(d / width);
    if (k >= panels) k = panels - 1;
    const double a = width * k;
    double value = panel_start[k];
    if (d > a) {
      const std::span<const double> node_x(xs.data() + k * per_panel, per_panel);
      const std::span<const double> node_h(h.data() + k * per_panel, per_panel);
      const BarycentricInterpolant interp(node_x, node_h);
      value += rx.integrate(interp, a, d);
    }
    out[gi] = value;
  }
  return out;
}

DistanceCdf quadrature_cdf(std::span<const double> grid, const NetworkParams& p,
                           const QuadratureSpec& q, PairModel model,
                           CdfKind kind, unsigned threads) {
  validate_distance_grid(grid);
  p.validate();
  q.validate();
  const std::vector<double> coarse = cumulative_pass(grid, p, q, model, threads);
  const std::vector<double> fine =
      cumulative_pass(grid, p, q.refined(), model, threads);

  DistanceCdf cdf;
  cdf.kind = kind;
  cdf.grid.assign(grid.begin(), grid.end());
  cdf.values.resize(grid.size());
  double running = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cdf.quadrature_error =
        std::max(cdf.quadrature_error, std::abs(fine[i] - coarse[i]));
    double v = fine[i];
    // Rounding-level excursions are clamped silently.
    if (v < -1e-9 || v > 1.0 + 1e-9) cdf.clamped = true;
    v = std::clamp(v, 0.0, 1.0);
    // The interpolated partial panels can dip by rounding; keep the
    // tabulated CDF monotone.
    running = std::max(running, v);
    cdf.values[i] = running;
  }
  cdf.converged = cdf.quadrature_error <= q.tolerance;
  cdf.out_of_coverage_mass = 1.0 - cdf.values.back();
  return cdf;
}

double g_at(double x, double phi, const NetworkParams& p,
            const QuadratureSpec& q) {
  const FoldedAngles folded = fold_symmetry(phi, 0.0);
  const PairIntegrator integrator(p, q, PairModel::exact_union);
  return g_value(x, folded.phi, integrator.opposite_half(x), integrator, p);
}

}  // namespace

double g_density(double x, double phi, const NetworkParams& p,
                 const QuadratureSpec& q) {
  p.validate();
  q.validate();
  if (!(x >= 0.0)) throw std::domain_error("g_density: x must be >= 0");
  const double coarse = g_at(x, phi, p, q);
  const double fine = g_at(x, phi, p, q.refined());
  const double scale = std::max(std::abs(fine), 1e-300);
  if (std::abs(fine - coarse) > q.tolerance * scale) {
    throw ConvergenceError("g_density did not converge at x=" +
                               std::to_string(x) + ", phi=" + std::to_string(phi),
                           std::abs(fine - coarse) / scale);
  }
  return fine;
}

DistanceCdf cdf_distance_correlated(std::span<const double> grid,
                                    const NetworkParams& p,
                                    const QuadratureSpec& q, unsigned threads) {
  return quadrature_cdf(grid, p, q, PairModel::exact_union,
                        CdfKind::correlated_approx, threads);
}

DistanceCdf cdf_distance_area_bound(std::span<const double> grid,
                                    const NetworkParams& p,
                                    const QuadratureSpec& q, unsigned threads) {
  return quadrature_cdf(grid, p, q, PairModel::area_bound,
                        CdfKind::area_bound_quadrature, threads);
}

double cdf_distance_independent_exact(double d, const NetworkParams& p) {
  if (!(d > 0.0)) return 0.0;
  const double u = p.blocker_intensity() * d;
  // The kernel peaks in a boundary layer of width ~1/u at phi = 0; grade the
  // panels geometrically from there.
  const GaussLegendre& rule = gauss_legendre(24);
  double a = 0.0;
  double b = std::min(0.5 * kPi, u > 0.0 ? 0.5 / u : 0.5 * kPi);
  double acc = 0.0;
  while (a < 0.5 * kPi) {
    acc += rule.integrate(
        [&](double phi) { return radial_kernel(u * std::sin(phi)); }, a, b);
    a = b;
    b = std::min(0.5 * kPi, 2.0 * b);
  }
  // Visible-BS measure of the disk: 4 d^2 integral_0^{pi/2} kernel dphi.
  const double visible_area = 4.0 * d * d * acc;
  return -std::expm1(-p.bs_density * visible_area);
}

DistanceCdf tabulate_noblockage(std::span<const double> grid,
                                const NetworkParams& p) {
  validate_distance_grid(grid);
  DistanceCdf cdf;
  cdf.kind = CdfKind::no_blockage;
  cdf.grid.assign(grid.begin(), grid.end());
  for (const double d : grid) cdf.values.push_back(cdf_distance_noblockage(d, p));
  cdf.out_of_coverage_mass = 1.0 - cdf.values.back();
  return cdf;
}

DistanceCdf tabulate_independent(std::span<const double> grid,
                                 const NetworkParams& p) {
  validate_distance_grid(grid);
  DistanceCdf cdf;
  cdf.kind = CdfKind::independent_bound;
  cdf.grid.assign(grid.begin(), grid.end());
  for (const double d : grid) cdf.values.push_back(cdf_distance_independent(d, p));
  cdf.out_of_coverage_mass = 1.0 - cdf.values.back();
  return cdf;
}

double project_height(double d, const HeightParams& h) {
  const double dh = h.min_distance();
  if (d < dh) {
    throw std::domain_error("project_height: 3-D distance " + std::to_string(d) +
                            " is below the height difference " +
                            std::to_string(dh));
  }
  return std::sqrt(std::max(0.0, (d - dh) * (d + dh)));
}

DistanceCdf cdf_distance_with_height(std::span<const double> grid,
                                     const NetworkParams& p,
                                     const HeightParams& h, CdfKind kind,
                                     const QuadratureSpec& q,
                                     unsigned threads) {
  validate_distance_grid(grid);
  h.validate();
  const double d_min = h.min_distance();

  std::vector<double> projected;
  std::size_t first = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= d_min) {
      if (first == grid.size()) first = i;
      projected.push_back(project_height(grid[i], h));
    }
  }

  DistanceCdf planar;
  if (!projected.empty()) {
    switch (kind) {
      case CdfKind::no_blockage:
        planar = tabulate_noblockage(projected, p);
        break;
      case CdfKind::independent_bound:
        planar = tabulate_independent(projected, p);
        break;
      case CdfKind::correlated_approx:
        planar = cdf_distance_correlated(projected, p, q, threads);
        break;
      case CdfKind::area_bound_quadrature:
        planar = cdf_distance_area_bound(projected, p, q, threads);
        break;
      case CdfKind::empirical:
        throw std::invalid_argument(
            "cdf_distance_with_height needs an analytic CDF kind");
    }
  } else if (kind == CdfKind::empirical) {
    throw std::invalid_argument(
        "cdf_distance_with_height needs an analytic CDF kind");
  }

  DistanceCdf out;
  out.kind = kind;
  out.grid.assign(grid.begin(), grid.end());
  out.values.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    out.values[first + i] = planar.values[i];
  }
  out.converged = planar.converged;
  out.quadrature_error = planar.quadrature_error;
  out.clamped = planar.clamped;
  out.out_of_coverage_mass = 1.0 - out.values.back();
  return out;
}

}  // namespace blockgeom
