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

#include "blockgeom/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "blockgeom/parallel.hpp"
#include "blockgeom/rng.hpp"

namespace blockgeom {

SimWindow SimWindow::for_params(const NetworkParams& p, double radius) {
  return {radius, 0.5 * p.length.max};
}

void SimWindow::validate(const NetworkParams& p) const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("window.radius must be > 0");
  }
  if (!(margin >= 0.5 * p.length.max)) {
    throw std::invalid_argument(
        "window.margin must be at least half the longest blockage");
  }
}

BlockageIndex::BlockageIndex(std::span<const Blockage> blockages, double cell)
    : cell_(cell) {
  if (!(cell > 0.0)) throw std::invalid_argument("index cell must be > 0");
  if (blockages.empty()) return;
  double xmin = blockages.front().center.x;
  double xmax = xmin;
  double ymin = blockages.front().center.y;
  double ymax = ymin;
  for (const Blockage& b : blockages) {
    xmin = std::min(xmin, b.center.x);
    xmax = std::max(xmax, b.center.x);
    ymin = std::min(ymin, b.center.y);
    ymax = std::max(ymax, b.center.y);
    const double h = 0.5 * b.length;
    reach_x_ = std::max(reach_x_, h * std::abs(std::cos(b.orientation)));
    reach_y_ = std::max(reach_y_, h * std::abs(std::sin(b.orientation)));
  }
  x0_ = xmin;
  y0_ = ymin;
  nx_ = static_cast<long>((xmax - xmin) / cell_) + 1;
  ny_ = static_cast<long>((ymax - ymin) / cell_) + 1;

  auto cell_of = [&](const Blockage& b) {
    const long cx = std::min(nx_ - 1, static_cast<long>((b.center.x - x0_) / cell_));
    const long cy = std::min(ny_ - 1, static_cast<long>((b.center.y - y0_) / cell_));
    return static_cast<std::size_t>(cy * nx_ + cx);
  };
  // Counting sort by cell, keeping input order within a cell.
  start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
  for (const Blockage& b : blockages) ++start_[cell_of(b) + 1];
  for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
  items_.resize(blockages.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (const Blockage& b : blockages) items_[fill[cell_of(b)]++] = b;
}

namespace {

// Visits, row by row, the runs of cells whose centers could hold a segment
// (half-extents reach_x, reach_y) touching [a, b]. `visit(row, col0, col1)`
// returns true to stop early.
template <class Visit>
bool sweep_cells(Point2 a, Point2 b, double x0, double y0, double cell, long nx,
                 long ny, double reach_x, double reach_y, Visit&& visit) {
  const double lo_y = std::min(a.y, b.y);
  const double hi_y = std::max(a.y, b.y);
  const double dy = b.y - a.y;
  const double dx = b.x - a.x;
  long row0 = static_cast<long>(std::floor((lo_y - reach_y - y0) / cell));
  long row1 = static_cast<long>(std::floor((hi_y + reach_y - y0) / cell));
  row0 = std::max(row0, 0L);
  row1 = std::min(row1, ny - 1);
  for (long row = row0; row <= row1; ++row) {
    // Part of the link within reach of centers in this row.
    const double band_lo = std::max(lo_y, y0 + cell * row - reach_y);
    const double band_hi = std::min(hi_y, y0 + cell * (row + 1) + reach_y);
    if (band_lo > band_hi) continue;
    double xa;
    double xb;
    if (std::abs(dy) > 0.0) {
      xa = a.x + dx * (band_lo - a.y) / dy;
      xb = a.x + dx * (band_hi - a.y) / dy;
    } else {
      xa = a.x;
      xb = b.x;
    }
    const double lo_x = std::min(xa, xb) - reach_x;
    const double hi_x = std::max(xa, xb) + reach_x;
    long col0 = static_cast<long>(std::floor((lo_x - x0) / cell));
    long col1 = static_cast<long>(std::floor((hi_x - x0) / cell));
    col0 = std::max(col0, 0L);
    col1 = std::min(col1, nx - 1);
    if (col0 > col1) continue;
    if (visit(row, col0, col1)) return true;
  }
  return false;
}

}  // namespace

bool BlockageIndex::blocked(Point2 a, Point2 b) const noexcept {
  if (items_.empty()) return false;
  return sweep_cells(a, b, x0_, y0_, cell_, nx_, ny_, reach_x_, reach_y_,
                     [&](long row, long col0, long col1) {
                       const auto first = static_cast<std::size_t>(row * nx_ + col0);
                       const auto last = static_cast<std::size_t>(row * nx_ + col1);
                       for (std::uint32_t k = start_[first]; k < start_[last + 1]; ++k) {
                         if (intersects(a, b, items_[k])) return true;
                       }
                       return false;
                     });
}

namespace {

// Poisson draw by sequential inversion for small means, where it costs one
// uniform; larger means go through the standard library.
long long poisson_count(Philox4x32& rng, double mean, double exp_neg_mean) {
  if (!(mean > 0.0)) return 0;
  if (mean > 30.0) {
    std::poisson_distribution<long long> dist(mean);
    return dist(rng);
  }
  const double u = rng.uniform();
  long long k = 0;
  double term = exp_neg_mean;
  double cdf = term;
  while (u >= cdf && term > 0.0) {
    ++k;
    term *= mean / static_cast<double>(k);
    cdf += term;
  }
  return k;
}

}  // namespace

namespace {

// Philox stream of cell (i, j) of an origin-anchored grid.
std::uint64_t cell_stream(long i, long j) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

// Keys of the two point processes of a layout.
std::uint64_t blockage_key(std::uint64_t seed) noexcept { return mix_seed(seed, 1); }
std::uint64_t base_station_key(std::uint64_t seed) noexcept { return mix_seed(seed, 2); }

}  // namespace

BlockageField::BlockageField(const NetworkParams& p, const SimWindow& w,
                             std::uint64_t seed)
    : params_(p), seed_(blockage_key(seed)) {
  outer_radius_ = w.radius + w.margin;
  half_cells_ = static_cast<long>(std::ceil(outer_radius_ / kFieldCell));
  cells_per_side_ = 2 * half_cells_;
  origin_ = -kFieldCell * static_cast<double>(half_cells_);
  cell_mean_ = p.blockage_density * kFieldCell * kFieldCell;
  exp_neg_mean_ = std::exp(-cell_mean_);
  const double h = 0.5 * p.length.max;
  reach_x_ = h * std::abs(std::cos(p.orientation));
  reach_y_ = h * std::abs(std::sin(p.orientation));
  const auto n = static_cast<std::size_t>(cells_per_side_ * cells_per_side_);
  begin_.assign(n, -1);
  count_.assign(n, 0);
}

std::span<const Blockage> BlockageField::cell(long col, long row) {
  const auto id = static_cast<std::size_t>(row * cells_per_side_ + col);
  if (begin_[id] < 0) {
    begin_[id] = static_cast<std::int32_t>(arena_.size());
    const double x_lo = origin_ + kFieldCell * static_cast<double>(col);
    const double y_lo = origin_ + kFieldCell * static_cast<double>(row);
    const double nearest_x = std::clamp(0.0, x_lo, x_lo + kFieldCell);
    const double nearest_y = std::clamp(0.0, y_lo, y_lo + kFieldCell);
    const double r2 = outer_radius_ * outer_radius_;
    if (nearest_x * nearest_x + nearest_y * nearest_y <= r2) {
      Philox4x32 rng(seed_, cell_stream(col - half_cells_, row - half_cells_));
      const long long k = poisson_count(rng, cell_mean_, exp_neg_mean_);
      const double span = params_.length.max - params_.length.min;
      for (long long i = 0; i < k; ++i) {
        Blockage b;
        b.center = {x_lo + kFieldCell * rng.uniform(), y_lo + kFieldCell * rng.uniform()};
        b.length = params_.length.min + span * rng.uniform();
        b.orientation = params_.orientation;
        if (b.center.x * b.center.x + b.center.y * b.center.y <= r2) {
          arena_.push_back(b);
        }
      }
    }
    count_[id] = static_cast<std::int32_t>(arena_.size()) - begin_[id];
  }
  return {arena_.data() + begin_[id], static_cast<std::size_t>(count_[id])};
}

bool BlockageField::blocked(Point2 a, Point2 b) {
  return sweep_cells(a, b, origin_, origin_, kFieldCell, cells_per_side_,
                     cells_per_side_, reach_x_, reach_y_,
                     [&](long row, long col0, long col1) {
                       for (long col = col0; col <= col1; ++col) {
                         for (const Blockage& blk : cell(col, row)) {
                           if (intersects(a, b, blk)) return true;
                         }
                       }
                       return false;
                     });
}

std::vector<Blockage> BlockageField::materialize() {
  std::vector<Blockage> out;
  for (long row = 0; row < cells_per_side_; ++row) {
    for (long col = 0; col < cells_per_side_; ++col) {
      const auto blk = cell(col, row);
      out.insert(out.end(), blk.begin(), blk.end());
    }
  }
  return out;
}

namespace {

template <class Blocker>
std::optional<double> nearest_visible(const std::vector<Point2>& bs, Blocker& index) {
  std::vector<std::pair<double, Point2>> order;
  order.reserve(bs.size());
  for (const Point2& b : bs) order.emplace_back(b.x * b.x + b.y * b.y, b);
  std::sort(order.begin(), order.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  const Point2 origin{0.0, 0.0};
  for (const auto& [d2, b] : order) {
    if (!index.blocked(origin, b)) return std::sqrt(d2);
  }
  return std::nullopt;
}

}  // namespace

std::vector<Point2> generate_base_stations(const NetworkParams& p,
                                           const SimWindow& w,
                                           std::uint64_t seed) {
  std::vector<Point2> out;
  const double r = w.radius;
  const double mean = p.bs_density * kBaseStationCell * kBaseStationCell;
  if (!(mean > 0.0)) return out;
  const double exp_neg_mean = std::exp(-mean);
  const std::uint64_t key = base_station_key(seed);
  const auto half = static_cast<long>(std::ceil(r / kBaseStationCell));
  out.reserve(static_cast<std::size_t>(p.bs_density * kPi * r * r * 1.2) + 16);
  for (long j = -half; j < half; ++j) {
    const double y_lo = kBaseStationCell * static_cast<double>(j);
    const double ny = std::clamp(0.0, y_lo, y_lo + kBaseStationCell);
    for (long i = -half; i < half; ++i) {
      const double x_lo = kBaseStationCell * static_cast<double>(i);
      const double nx = std::clamp(0.0, x_lo, x_lo + kBaseStationCell);
      if (nx * nx + ny * ny > r * r) continue;
      Philox4x32 rng(key, cell_stream(i, j));
      const long long k = poisson_count(rng, mean, exp_neg_mean);
      for (long long n = 0; n < k; ++n) {
        const Point2 q{x_lo + kBaseStationCell * rng.uniform(),
                       y_lo + kBaseStationCell * rng.uniform()};
        if (q.x * q.x + q.y * q.y <= r * r) out.push_back(q);
      }
    }
  }
  return out;
}

Layout gen_layout(const NetworkParams& p, const SimWindow& w, std::uint64_t seed) {
  p.validate();
  w.validate(p);
  Layout layout;
  layout.window = w;
  layout.seed = seed;
  layout.bs_positions = generate_base_stations(p, w, seed);
  layout.blockages = BlockageField(p, w, seed).materialize();
  return layout;
}

std::optional<double> nearest_visible_distance(const Layout& layout) {
  if (layout.bs_positions.empty()) return std::nullopt;
  const BlockageIndex index(layout.blockages);
  return nearest_visible(layout.bs_positions, index);
}

std::optional<double> nearest_visible_distance(const NetworkParams& p,
                                               const SimWindow& w,
                                               std::uint64_t seed) {
  const std::vector<Point2> bs = generate_base_stations(p, w, seed);
  if (bs.empty()) return std::nullopt;
  BlockageField field(p, w, seed);
  return nearest_visible(bs, field);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return mix_seed(seed, trial);
}

EmpiricalDistribution empirical_distance_samples(const NetworkParams& p,
                                                 const SimWindow& w,
                                                 std::size_t trials,
                                                 std::uint64_t seed,
                                                 const SimOptions& options) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  p.validate();
  w.validate(p);
  if (options.heights) options.heights->validate();
  const double dh = options.heights ? options.heights->min_distance() : 0.0;

  std::vector<double> result(trials, -1.0);
  parallel_for(trials, options.threads, [&](std::size_t i) {
    if (const auto d = nearest_visible_distance(p, w, trial_seed(seed, i))) {
      result[i] = dh > 0.0 ? std::hypot(*d, dh) : *d;
    }
  });

  EmpiricalDistribution out;
  out.samples.reserve(trials);
  for (const double d : result) {
    if (d < 0.0) {
      ++out.censored_count;
    } else {
      out.samples.push_back(d);
    }
  }
  std::sort(out.samples.begin(), out.samples.end());
  return out;
}

DistanceCdf empirical_cdf(const EmpiricalDistribution& dist,
                          std::span<const double> grid) {
  validate_distance_grid(grid);
  const auto n = static_cast<double>(dist.trials());
  DistanceCdf cdf;
  cdf.kind = CdfKind::empirical;
  cdf.grid.assign(grid.begin(), grid.end());
  cdf.values.reserve(grid.size());
  for (const double d : grid) {
    const auto count = std::upper_bound(dist.samples.begin(), dist.samples.end(), d) -
                       dist.samples.begin();
    cdf.values.push_back(n > 0 ? static_cast<double>(count) / n : 0.0);
  }
  cdf.out_of_coverage_mass = 1.0 - cdf.values.back();
  return cdf;
}

DistanceCdf empirical_cdf_distance(const NetworkParams& p, const SimWindow& w,
                                   std::size_t trials, std::uint64_t seed,
                                   const SimOptions& options) {
  const EmpiricalDistribution dist =
      empirical_distance_samples(p, w, trials, seed, options);
  const std::vector<double> grid = uniform_grid(0.0, w.radius, 512);
  return empirical_cdf(dist, grid);
}

EmpiricalDistribution rates_from_distances(const EmpiricalDistribution& distances,
                                           const RadioParams& radio) {
  radio.validate();
  const double gamma = snr_at_1m(radio);
  EmpiricalDistribution out;
  out.censored_count = distances.censored_count;
  out.samples.reserve(distances.samples.size());
  for (const double d : distances.samples) {
    // A base station at the user position would give unbounded capacity;
    // the PPP never places one there.
    out.samples.push_back(ergodic_capacity(d, gamma, radio.path_loss_exponent));
  }
  std::sort(out.samples.begin(), out.samples.end());
  return out;
}

EmpiricalDistribution empirical_rate_samples(const NetworkParams& p,
                                             const SimWindow& w,
                                             const RadioParams& radio,
                                             std::size_t trials,
                                             std::uint64_t seed,
                                             const SimOptions& options) {
  return rates_from_distances(empirical_distance_samples(p, w, trials, seed, options),
                              radio);
}

RateCdf empirical_rate_cdf(const EmpiricalDistribution& rates,
                           std::span<const double> grid) {
  const auto n = static_cast<double>(rates.trials());
  RateCdf cdf;
  cdf.grid.assign(grid.begin(), grid.end());
  cdf.zero_rate_mass = n > 0 ? static_cast<double>(rates.censored_count) / n : 0.0;
  for (const double r : grid) {
    const auto count = std::upper_bound(rates.samples.begin(), rates.samples.end(), r) -
                       rates.samples.begin();
    cdf.values.push_back(
        n > 0 ? (static_cast<double>(rates.censored_count) + static_cast<double>(count)) / n
              : 0.0);
  }
  return cdf;
}

double empirical_mean(const EmpiricalDistribution& dist) noexcept {
  const std::size_t n = dist.trials();
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (const double v : dist.samples) acc += v;
  return acc / static_cast<double>(n);
}

double ks_distance(const DistanceCdf& a, const DistanceCdf& b) {
  std::vector<double> grid(a.grid);
  grid.insert(grid.end(), b.grid.begin(), b.grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double worst = 0.0;
  for (const double d : grid) worst = std::max(worst, std::abs(a(d) - b(d)));
  return worst;
}

}  // namespace blockgeom
