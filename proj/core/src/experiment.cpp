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

#include "blockgeom/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "blockgeom/parallel.hpp"
#include "blockgeom/quadrature.hpp"
#include "blockgeom/rng.hpp"

namespace blockgeom {
namespace {

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

unsigned threads_of(const ExperimentConfig& cfg) {
  return resolve_threads(static_cast<int>(cfg.threads));
}

ResultTable base_table(const ExperimentConfig& cfg, std::vector<std::string> columns) {
  ResultTable t;
  t.columns = std::move(columns);
  t.set_meta("config_hash", hex64(config_hash(cfg)));
  t.set_meta("tool_version", kToolVersion);
  t.set_meta("seed", std::to_string(cfg.seed));
  t.set_meta("trials", std::to_string(cfg.trials));
  return t;
}

// The analytic distance CDF of `kind` on `grid`, including the height
// projection when configured.
DistanceCdf analytic_cdf(const ExperimentConfig& cfg, const NetworkParams& p,
                         std::span<const double> grid, CdfKind kind) {
  const unsigned threads = threads_of(cfg);
  if (const auto h = cfg.heights()) {
    return cdf_distance_with_height(grid, p, *h, kind, cfg.quadrature, threads);
  }
  switch (kind) {
    case CdfKind::no_blockage:
      return tabulate_noblockage(grid, p);
    case CdfKind::independent_bound:
      return tabulate_independent(grid, p);
    case CdfKind::correlated_approx:
      return cdf_distance_correlated(grid, p, cfg.quadrature, threads);
    case CdfKind::area_bound_quadrature:
      return cdf_distance_area_bound(grid, p, cfg.quadrature, threads);
    case CdfKind::empirical:
      break;
  }
  throw std::invalid_argument("analytic_cdf: empirical is not an analytic kind");
}

void note_convergence(ResultTable& t, const DistanceCdf& cdf, const std::string& label) {
  t.set_meta("converged_" + label, cdf.converged ? "true" : "false");
  t.set_meta("quadrature_error_" + label, num(cdf.quadrature_error));
  t.set_meta("clamped_" + label, cdf.clamped ? "true" : "false");
  if (!cdf.converged) {
    t.converged = false;
    t.diagnostics.push_back(label + ": quadrature error " + num(cdf.quadrature_error) +
                            " exceeds tolerance; raise the quadrature.* node counts");
  }
}

SimOptions sim_options(const ExperimentConfig& cfg) {
  SimOptions o;
  o.heights = cfg.heights();
  o.threads = threads_of(cfg);
  return o;
}

}  // namespace

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row width does not match the column count");
  }
  rows.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

void ResultTable::write_csv(std::ostream& out) const {
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
  out << "# converged: " << (converged ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << num(row[i]);
    out << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream s;
  write_csv(s);
  return s.str();
}

ResultTable run_distance_cdf(const ExperimentConfig& cfg) {
  ResultTable t =
      base_table(cfg, {"d", "F_noblockage", "F_independent", "F_correlated", "F_empirical"});
  const std::vector<double> grid = uniform_grid(0.0, cfg.grid.distance_max, cfg.grid.distance_points);
  const NetworkParams& p = cfg.network;
  const DistanceCdf none = analytic_cdf(cfg, p, grid, CdfKind::no_blockage);
  const DistanceCdf ind = analytic_cdf(cfg, p, grid, CdfKind::independent_bound);
  const DistanceCdf corr = analytic_cdf(cfg, p, grid, CdfKind::correlated_approx);
  const EmpiricalDistribution samples =
      empirical_distance_samples(p, cfg.window, cfg.trials, cfg.seed, sim_options(cfg));
  const DistanceCdf emp = empirical_cdf(samples, grid);
  note_convergence(t, corr, "correlated");
  t.set_meta("censored", std::to_string(samples.censored_count));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.add_row({grid[i], none.values[i], ind.values[i], corr.values[i], emp.values[i]});
  }
  return t;
}

ResultTable run_rate_cdf(const ExperimentConfig& cfg) {
  ResultTable t = base_table(cfg, {"r", "F_rate_bound", "F_rate_empirical"});
  t.set_meta("unit", std::string(to_string(cfg.unit)));
  const std::vector<double> rates = log_grid(cfg.grid.rate_min, cfg.grid.rate_max, cfg.grid.rate_points);
  const std::vector<double> dgrid =
      uniform_grid(0.0, cfg.grid.rate_distance_max, cfg.grid.rate_distance_points);
  const double gamma = snr_at_1m(cfg.radio);
  const double alpha = cfg.radio.path_loss_exponent;
  const DistanceCdf corr = analytic_cdf(cfg, cfg.network, dgrid, CdfKind::correlated_approx);
  note_convergence(t, corr, "correlated");
  const RateCdf bound = cdf_rate_bound(rates, corr, gamma, alpha);
  const EmpiricalDistribution samples = empirical_rate_samples(
      cfg.network, cfg.window, cfg.radio, cfg.trials, cfg.seed, sim_options(cfg));
  const RateCdf emp = empirical_rate_cdf(samples, rates);
  t.set_meta("zero_rate_mass_bound", num(bound.zero_rate_mass));
  t.set_meta("zero_rate_mass_empirical", num(emp.zero_rate_mass));
  const double scale = cfg.unit == RateUnit::bits ? 1.0 / std::log(2.0) : 1.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    t.add_row({rates[i] * scale, bound.values[i], emp.values[i]});
  }
  return t;
}

ResultTable run_avg_rate_sweep(const ExperimentConfig& cfg,
                               const std::vector<double>& blockage_densities,
                               const std::optional<std::string>& layout_path) {
  if (blockage_densities.empty()) throw std::invalid_argument("blockage density list is empty");
  std::vector<std::string> columns{"lambda_b", "mean_rate_bound_analytic",
                                   "mean_rate_empirical_synthetic"};
  if (layout_path) columns.emplace_back("mean_rate_empirical_ingested");
  ResultTable t = base_table(cfg, columns);
  t.set_meta("unit", std::string(to_string(cfg.unit)));
  const double scale = cfg.unit == RateUnit::bits ? 1.0 / std::log(2.0) : 1.0;
  const double gamma = snr_at_1m(cfg.radio);
  const double alpha = cfg.radio.path_loss_exponent;
  const std::vector<double> dgrid =
      uniform_grid(0.0, cfg.grid.rate_distance_max, cfg.grid.rate_distance_points);

  std::optional<BuildingLayout> layout;
  double full_density = 0.0;
  if (layout_path) {
    layout = load_layout(*layout_path, cfg.ingest.format);
    const SegmentSet full = polygons_to_segments(*layout, cfg.ingest.axis, cfg.ingest.correction_factor);
    full_density = estimate_stats(full, OrientationFilter::axis).blockage_density;
    t.set_meta("ingested_full_density", num(full_density));
    t.set_meta("correction_factor", num(cfg.ingest.correction_factor));
  }

  bool all_converged = true;
  double worst_error = 0.0;
  bool any_clamped = false;
  for (std::size_t k = 0; k < blockage_densities.size(); ++k) {
    const double lambda = blockage_densities[k];
    NetworkParams p = cfg.network;
    p.blockage_density = lambda;
    const DistanceCdf corr = analytic_cdf(cfg, p, dgrid, CdfKind::correlated_approx);
    all_converged = all_converged && corr.converged;
    worst_error = std::max(worst_error, corr.quadrature_error);
    any_clamped = any_clamped || corr.clamped;
    const double analytic = mean_rate_bound([&](double d) { return corr(d); }, gamma, alpha);
    const double synthetic = empirical_mean(
        empirical_rate_samples(p, cfg.window, cfg.radio, cfg.trials, cfg.seed, sim_options(cfg)));
    std::vector<double> row{lambda, analytic * scale, synthetic * scale};
    if (layout) {
      const double fraction = full_density > 0.0 ? lambda / full_density : 0.0;
      if (fraction > 1.0) {
        row.push_back(std::nan(""));
        t.diagnostics.push_back("lambda_b " + num(lambda) + " exceeds the ingested layout density " +
                                num(full_density));
      } else {
        const BuildingLayout sub = subsample(*layout, fraction, mix_seed(cfg.seed, k));
        SegmentSet segs = polygons_to_segments(sub, cfg.ingest.axis, cfg.ingest.correction_factor);
        segs.region_area = layout->bbox.area();
        const EmpiricalDistribution d = ingested_distance_samples(
            sub, segs, p.bs_density, cfg.ingest.radius, cfg.trials, cfg.seed, threads_of(cfg));
        row.push_back(empirical_mean(rates_from_distances(d, cfg.radio)) * scale);
      }
    }
    t.add_row(std::move(row));
  }
  t.set_meta("converged_correlated", all_converged ? "true" : "false");
  t.set_meta("quadrature_error_correlated", num(worst_error));
  t.set_meta("clamped_correlated", any_clamped ? "true" : "false");
  if (!all_converged) {
    t.converged = false;
    t.diagnostics.push_back("correlated: quadrature error " + num(worst_error) +
                            " exceeds tolerance; raise the quadrature.* node counts");
  }
  return t;
}

ResultTable run_ingest_stats(const ExperimentConfig& cfg) {
  if (cfg.ingest.layout.empty()) throw ConfigError("ingest.layout", "no layout file configured");
  const BuildingLayout layout = load_layout(cfg.ingest.layout, cfg.ingest.format);
  const SegmentSet set = polygons_to_segments(layout, cfg.ingest.axis, cfg.ingest.correction_factor);
  ResultTable t = base_table(cfg, {"family", "count", "mean_length", "blockage_density"});
  t.set_meta("polygons", std::to_string(layout.polygons.size()));
  t.set_meta("region_area", num(set.region_area));
  t.set_meta("correction_factor", num(set.correction_factor));
  std::size_t w = 0;
  for (const auto& msg : layout.warnings) t.set_meta("warning_" + std::to_string(w++), msg);
  for (const auto& msg : set.warnings) t.set_meta("warning_" + std::to_string(w++), msg);
  const OrientationFilter filters[] = {OrientationFilter::axis, OrientationFilter::perpendicular,
                                       OrientationFilter::all};
  for (int f = 0; f < 3; ++f) {
    try {
      const BlockageStats s = estimate_stats(set, filters[f]);
      t.add_row({static_cast<double>(f), static_cast<double>(s.count), s.mean_length,
                 s.blockage_density});
    } catch (const std::domain_error&) {
      t.add_row({static_cast<double>(f), 0.0, std::nan(""), 0.0});
    }
  }
  return t;
}

std::vector<CheckResult> run_selfcheck(unsigned threads) {
  std::vector<CheckResult> out;
  auto record = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  {
    const auto c = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    const bool ok = c[0] == 0x6627e8d5u && c[1] == 0xe169c58du && c[2] == 0xbc57ac4cu &&
                    c[3] == 0x9b00dbd8u;
    record("philox known-answer vector", ok, "counter 0, key 0");
  }
  {
    const double e1 = exponential_integral_e1(1.0);
    record("E1(1)", std::abs(e1 - 0.21938393439552029) < 1e-13, num(e1));
  }
  {
    // Monte Carlo area of the union of two blocking regions.
    Philox4x32 rng(2024, 0);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double l = 5.0 + 50.0 * rng.uniform();
      const double x = 20.0 + 200.0 * rng.uniform();
      const double t = 20.0 + 200.0 * rng.uniform();
      const double phi = kTwoPi * rng.uniform();
      const double omega = kTwoPi * rng.uniform();
      const Point2 a{x * std::cos(phi), x * std::sin(phi)};
      const Point2 b{t * std::cos(omega), t * std::sin(omega)};
      const double lo_x = std::min({0.0, a.x, b.x}) - l;
      const double hi_x = std::max({0.0, a.x, b.x}) + l;
      const double lo_y = std::min({0.0, a.y, b.y});
      const double hi_y = std::max({0.0, a.y, b.y});
      const int n = 200000;
      int hits = 0;
      for (int i = 0; i < n; ++i) {
        const Blockage blk{{lo_x + (hi_x - lo_x) * rng.uniform(), lo_y + (hi_y - lo_y) * rng.uniform()},
                           l, 0.0};
        if (intersects(Point2{}, a, blk) || intersects(Point2{}, b, blk)) ++hits;
      }
      const double mc = (hi_x - lo_x) * (hi_y - lo_y) * hits / n;
      const double exact = union_area(l, x, phi, t, omega);
      if (exact > 0.0) worst = std::max(worst, std::abs(mc - exact) / exact);
    }
    record("union area vs Monte Carlo", worst < 0.03, "max relative error " + num(worst));
  }
  {
    const NetworkParams p;
    const double got = expected_blockers_pair(120.0, 0.7, 80.0, 1.1, p.blockage_density, p.length);
    const GaussLegendre& gl = gauss_legendre(64);
    double integral = 0.0;
    const int panels = 64;
    const double w = (p.length.max - p.length.min) / panels;
    for (int i = 0; i < panels; ++i) {
      const double a = p.length.min + i * w;
      integral += gl.integrate([&](double l) { return union_area(l, 120.0, 0.7, 80.0, 1.1); }, a, a + w);
    }
    const double want = p.blockage_density * integral / (p.length.max - p.length.min);
    record("pair blockers vs numeric integration", std::abs(got - want) <= 1e-6 * want,
           num(got) + " vs " + num(want));
  }
  {
    NetworkParams p;
    p.blockage_density = 0.0;
    const SimWindow w = SimWindow::for_params(p, 400.0);
    SimOptions o;
    o.threads = threads;
    const DistanceCdf emp = empirical_cdf(empirical_distance_samples(p, w, 20000, 99, o),
                                          uniform_grid(0.0, 300.0, 301));
    const DistanceCdf exact = tabulate_noblockage(emp.grid, p);
    const double ks = ks_distance(emp, exact);
    record("no-blockage Monte Carlo KS", ks < 0.015, "KS " + num(ks));
  }
  {
    const NetworkParams p;
    const std::vector<double> grid{25.0, 50.0, 100.0, 150.0, 200.0};
    QuadratureSpec q;
    q.outer_x = q.outer_phi = q.inner_t = q.inner_omega = 24;
    q.tolerance = 1e-2;
    const DistanceCdf corr = cdf_distance_correlated(grid, p, q, threads);
    bool ordered = corr.converged;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ordered = ordered && corr.values[i] <= cdf_distance_independent(grid[i], p) + 1e-3;
    }
    record("correlated below independent bound", ordered,
           "quadrature error " + num(corr.quadrature_error));
  }
  return out;
}

}  // namespace blockgeom
