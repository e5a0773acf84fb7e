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

#include "blockgeom/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "blockgeom/parallel.hpp"
#include "blockgeom/rng.hpp"

namespace blockgeom {
namespace {

using nlohmann::json;

std::string ring_label(std::size_t i) { return "ring " + std::to_string(i); }

bool is_meter_unit(const std::string& unit) {
  return unit == "m" || unit == "meter" || unit == "meters" || unit == "metre" ||
         unit == "metres";
}

Point2 parse_vertex(const json& vertex, const std::string& where) {
  if (!vertex.is_array()) throw ParseError(where + ": expected an [x, y] pair");
  if (vertex.size() == 3) {
    throw UnitError(where + ": 3-D coordinates are not supported, expected planar meters");
  }
  if (vertex.size() != 2 || !vertex[0].is_number() || !vertex[1].is_number()) {
    throw ParseError(where + ": expected an [x, y] pair of numbers");
  }
  const Point2 p{vertex[0].get<double>(), vertex[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw ParseError(where + ": coordinates must be finite");
  }
  return p;
}

Ring parse_ring(const json& value, std::size_t index) {
  const std::string label = ring_label(index);
  if (!value.is_array()) throw ParseError(label + ": expected an array of [x, y] pairs");
  Ring ring;
  ring.reserve(value.size());
  for (std::size_t v = 0; v < value.size(); ++v) {
    ring.push_back(parse_vertex(value[v], label + ", vertex " + std::to_string(v)));
  }
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  if (ring.size() < 3) throw ParseError(label + ": a ring needs at least 3 distinct vertices");
  return ring;
}

// All vertices on one line (or coincident): a ring that encloses nothing.
bool is_collinear(const Ring& ring) noexcept {
  const Point2 o = ring.front();
  std::size_t k = 1;
  while (k < ring.size() && ring[k] == o) ++k;
  if (k == ring.size()) return true;
  const double ux = ring[k].x - o.x;
  const double uy = ring[k].y - o.y;
  for (const Point2& p : ring) {
    if (ux * (p.y - o.y) - uy * (p.x - o.x) != 0.0) return false;
  }
  return true;
}

void extend(BoundingBox& box, Point2 p, bool& empty) noexcept {
  if (empty) {
    box.lo = box.hi = p;
    empty = false;
    return;
  }
  box.lo.x = std::min(box.lo.x, p.x);
  box.lo.y = std::min(box.lo.y, p.y);
  box.hi.x = std::max(box.hi.x, p.x);
  box.hi.y = std::max(box.hi.y, p.y);
}

double parse_number(std::string_view field, std::size_t line, const char* name) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line) + ": invalid " + name + " '" +
                     std::string(field) + "'");
  }
  return value;
}

// Angle of `orientation` relative to `axis`, reduced to [0, pi).
double relative_direction(double orientation, double axis) noexcept {
  double d = std::fmod(orientation - axis, kPi);
  if (d < 0.0) d += kPi;
  return d >= kPi ? 0.0 : d;
}

// 0 for the axis family, 1 for the perpendicular one, and the angular
// distance to the chosen direction.
std::pair<int, double> classify(double orientation, double axis) noexcept {
  const double d = relative_direction(orientation, axis);
  const double to_axis = std::min(d, kPi - d);
  const double to_perp = std::abs(d - 0.5 * kPi);
  if (to_axis <= to_perp) return {0, to_axis};
  return {1, to_perp};
}

}  // namespace

LayoutFormat parse_layout_format(std::string_view name) {
  if (name == "json-polygons") return LayoutFormat::json_polygons;
  if (name == "csv-segments" || name == "csv-edges") return LayoutFormat::csv_segments;
  throw std::invalid_argument("unknown layout format '" + std::string(name) +
                              "' (expected json-polygons or csv-segments)");
}

double ring_area(std::span<const Point2> ring) noexcept {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(acc);
}

bool ring_is_simple(std::span<const Point2> ring) noexcept {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring[i];
    const Point2 b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool point_in_ring(Point2 p, std::span<const Point2> ring) noexcept {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[i];
    const Point2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

BuildingLayout parse_polygons_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError("layout is empty");
  }
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const json* rings = &doc;
  if (doc.is_object()) {
    if (doc.contains("units")) {
      if (!doc["units"].is_string()) throw ParseError("\"units\" must be a string");
      const auto unit = doc["units"].get<std::string>();
      if (!is_meter_unit(unit)) {
        throw UnitError("unsupported units '" + unit +
                        "': coordinates must be planar meters (project lat/lon first)");
      }
    }
    if (!doc.contains("polygons")) throw ParseError("object layout needs a \"polygons\" array");
    rings = &doc["polygons"];
  }
  if (!rings->is_array()) throw ParseError("layout must be an array of polygons");

  BuildingLayout layout;
  layout.polygons.reserve(rings->size());
  for (std::size_t i = 0; i < rings->size(); ++i) {
    Ring ring = parse_ring((*rings)[i], i);
    if (is_collinear(ring)) {
      layout.warnings.push_back(ring_label(i) + " has zero area");
    } else if (!ring_is_simple(ring)) {
      throw ParseError(ring_label(i) + " is self-intersecting");
    }
    layout.polygons.push_back(std::move(ring));
  }
  layout.bbox = compute_bbox(layout);
  if (doc.is_object() && doc.contains("bbox")) {
    const json& box = doc["bbox"];
    if (!box.is_array() || box.size() != 2) {
      throw ParseError("\"bbox\" must be [[xmin, ymin], [xmax, ymax]]");
    }
    const BoundingBox given{parse_vertex(box[0], "bbox corner 0"),
                            parse_vertex(box[1], "bbox corner 1")};
    if (!(given.width() > 0.0 && given.height() > 0.0)) {
      throw ParseError("\"bbox\" must have positive width and height");
    }
    if (layout.item_count() > 0 &&
        (layout.bbox.lo.x < given.lo.x || layout.bbox.lo.y < given.lo.y ||
         layout.bbox.hi.x > given.hi.x || layout.bbox.hi.y > given.hi.y)) {
      throw ParseError("\"bbox\" does not contain every polygon");
    }
    layout.bbox = given;
  }
  return layout;
}

BuildingLayout parse_segments_csv(std::string_view text) {
  BuildingLayout layout;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    std::array<std::string_view, 4> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (count == fields.size()) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 4 fields cx,cy,length,orientation");
      }
      fields[count++] = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != fields.size()) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 4 fields cx,cy,length,orientation");
    }
    Blockage b;
    b.center.x = parse_number(fields[0], line_no, "cx");
    b.center.y = parse_number(fields[1], line_no, "cy");
    b.length = parse_number(fields[2], line_no, "length");
    b.orientation = parse_number(fields[3], line_no, "orientation");
    if (b.length < 0.0) {
      throw ParseError("line " + std::to_string(line_no) + ": length must be >= 0");
    }
    layout.segments.push_back(b);
  }
  if (layout.segments.empty()) throw ParseError("segment file holds no segments");
  layout.bbox = compute_bbox(layout);
  return layout;
}

BuildingLayout load_layout(const std::filesystem::path& path, LayoutFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open layout file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ParseError("layout file " + path.string() + " is empty");
  }
  return format == LayoutFormat::json_polygons ? parse_polygons_json(text)
                                               : parse_segments_csv(text);
}

std::string polygons_to_json(const BuildingLayout& layout) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "{\n\"units\": \"m\",\n\"bbox\": [[%.17g, %.17g], [%.17g, %.17g]],\n"
                "\"polygons\": [\n",
                layout.bbox.lo.x, layout.bbox.lo.y, layout.bbox.hi.x, layout.bbox.hi.y);
  std::string out = buf;
  for (std::size_t i = 0; i < layout.polygons.size(); ++i) {
    out += "  [";
    const Ring& ring = layout.polygons[i];
    for (std::size_t v = 0; v < ring.size(); ++v) {
      std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", ring[v].x, ring[v].y);
      if (v > 0) out += ", ";
      out += buf;
    }
    out += i + 1 < layout.polygons.size() ? "],\n" : "]\n";
  }
  out += "]\n}\n";
  return out;
}

BoundingBox compute_bbox(const BuildingLayout& layout) noexcept {
  BoundingBox box;
  bool empty = true;
  for (const Ring& ring : layout.polygons) {
    for (const Point2& p : ring) extend(box, p, empty);
  }
  for (const Blockage& b : layout.segments) {
    extend(box, b.endpoint_a(), empty);
    extend(box, b.endpoint_b(), empty);
  }
  return box;
}

SegmentSet make_segment_set(std::vector<Blockage> blockages, double region_area,
                            double axis, double correction_factor) {
  if (!(correction_factor > 0.0) || !std::isfinite(correction_factor)) {
    throw std::invalid_argument("correction_factor must be > 0");
  }
  SegmentSet set;
  set.region_area = region_area;
  set.axis = axis;
  set.correction_factor = correction_factor;
  std::array<double, 2> total{0.0, 0.0};
  for (Blockage& b : blockages) {
    const auto [family, off] = classify(b.orientation, axis);
    (void)off;
    b.orientation = axis + 0.5 * kPi * family;
    ++set.direction[family].count;
    total[family] += b.length;
  }
  for (int f = 0; f < 2; ++f) {
    if (set.direction[f].count > 0) {
      set.direction[f].mean_length = total[f] / static_cast<double>(set.direction[f].count);
    }
  }
  set.segments = std::move(blockages);
  return set;
}

SegmentSet polygons_to_segments(const BuildingLayout& layout, double axis,
                                double correction_factor) {
  std::vector<Blockage> raw;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < layout.polygons.size(); ++i) {
    const Ring& ring = layout.polygons[i];
    double worst = 0.0;
    for (std::size_t v = 0; v < ring.size(); ++v) {
      const Point2 a = ring[v];
      const Point2 b = ring[(v + 1) % ring.size()];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (len == 0.0) continue;
      Blockage blk;
      blk.center = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
      blk.length = len;
      blk.orientation = std::atan2(b.y - a.y, b.x - a.x);
      worst = std::max(worst, classify(blk.orientation, axis).second);
      raw.push_back(blk);
    }
    if (worst > kSnapWarningAngle) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s has an edge %.1f deg away from both directions",
                    ring_label(i).c_str(), worst * 180.0 / kPi);
      warnings.emplace_back(buf);
    }
  }
  for (std::size_t i = 0; i < layout.segments.size(); ++i) {
    const double off = classify(layout.segments[i].orientation, axis).second;
    if (off > kSnapWarningAngle) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "segment %zu is %.1f deg away from both directions", i,
                    off * 180.0 / kPi);
      warnings.emplace_back(buf);
    }
    raw.push_back(layout.segments[i]);
  }
  SegmentSet set = make_segment_set(std::move(raw), layout.bbox.area(), axis, correction_factor);
  set.warnings = std::move(warnings);
  return set;
}

BlockageStats estimate_stats(const SegmentSet& set, OrientationFilter filter) {
  if (!(set.region_area > 0.0)) {
    throw std::domain_error("estimate_stats: region area must be > 0");
  }
  if (!(set.correction_factor > 0.0)) {
    throw std::domain_error("estimate_stats: correction factor must be > 0");
  }
  BlockageStats out;
  double total = 0.0;
  for (const Blockage& b : set.segments) {
    const int family = classify(b.orientation, set.axis).first;
    const bool keep = filter == OrientationFilter::all ||
                      (filter == OrientationFilter::axis && family == 0) ||
                      (filter == OrientationFilter::perpendicular && family == 1);
    if (!keep) continue;
    ++out.count;
    total += b.length;
  }
  if (out.count == 0) {
    throw std::domain_error("estimate_stats: no segment passes the filter, mean length undefined");
  }
  const auto n = static_cast<double>(out.count);
  out.blockage_density = set.correction_factor * n / set.region_area;
  out.mean_length = total / n;
  return out;
}

BuildingLayout subsample(const BuildingLayout& layout, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample fraction must be in [0, 1]");
  }
  BuildingLayout out;
  out.bbox = layout.bbox;
  auto keep = [&](std::size_t item) {
    Philox4x32 rng(seed, item);
    return rng.uniform() < fraction;
  };
  for (std::size_t i = 0; i < layout.polygons.size(); ++i) {
    if (keep(i)) out.polygons.push_back(layout.polygons[i]);
  }
  const std::size_t offset = layout.polygons.size();
  for (std::size_t i = 0; i < layout.segments.size(); ++i) {
    if (keep(offset + i)) out.segments.push_back(layout.segments[i]);
  }
  return out;
}

void ManhattanSpec::validate() const {
  if (!(block > 0.0) || !(street >= 0.0) || !(extent >= block + street)) {
    throw std::invalid_argument("manhattan grid needs block > 0, street >= 0, extent >= block + street");
  }
  if (lots_per_side < 1) throw std::invalid_argument("lots_per_side must be >= 1");
  const double lot = block / lots_per_side;
  if (!(max_setback >= 0.0) || !(2.0 * max_setback < lot)) {
    throw std::invalid_argument("max_setback must be in [0, lot / 2)");
  }
}

BuildingLayout manhattan_grid(const ManhattanSpec& spec) {
  spec.validate();
  const double pitch = spec.block + spec.street;
  const auto blocks = static_cast<long>(std::floor((spec.extent + spec.street) / pitch));
  const double lot = spec.block / spec.lots_per_side;
  BuildingLayout layout;
  std::uint64_t stream = 0;
  for (long by = 0; by < blocks; ++by) {
    for (long bx = 0; bx < blocks; ++bx) {
      const double x0 = bx * pitch;
      const double y0 = by * pitch;
      for (int ly = 0; ly < spec.lots_per_side; ++ly) {
        for (int lx = 0; lx < spec.lots_per_side; ++lx) {
          Philox4x32 rng(spec.seed, stream++);
          const double left = x0 + lx * lot + spec.max_setback * rng.uniform();
          const double right = x0 + (lx + 1) * lot - spec.max_setback * rng.uniform();
          const double bottom = y0 + ly * lot + spec.max_setback * rng.uniform();
          const double top = y0 + (ly + 1) * lot - spec.max_setback * rng.uniform();
          layout.polygons.push_back(
              {{left, bottom}, {right, bottom}, {right, top}, {left, top}});
        }
      }
    }
  }
  layout.bbox = {{0.0, 0.0}, {blocks * pitch - spec.street, blocks * pitch - spec.street}};
  return layout;
}

NetworkParams synthetic_params(const BlockageStats& stats, double bs_density, double axis) {
  NetworkParams p;
  p.bs_density = bs_density;
  p.blockage_density = stats.blockage_density;
  p.length = {0.0, 2.0 * stats.mean_length};
  p.orientation = axis;
  return p;
}

EmpiricalDistribution ingested_distance_samples(const BuildingLayout& layout,
                                                const SegmentSet& set, double bs_density,
                                                double radius, std::size_t trials,
                                                std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (!(bs_density >= 0.0)) throw std::invalid_argument("bs_density must be >= 0");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  const BoundingBox box = layout.bbox;
  if (!(box.width() > 2.0 * radius) || !(box.height() > 2.0 * radius)) {
    throw std::invalid_argument(
        "layout bounding box must exceed twice the base-station radius on both sides");
  }
  const BlockageIndex index(set.segments);
  std::vector<BoundingBox> boxes;
  boxes.reserve(layout.polygons.size());
  for (const Ring& ring : layout.polygons) {
    BuildingLayout one;
    one.polygons.push_back(ring);
    boxes.push_back(compute_bbox(one));
  }
  auto inside_building = [&](Point2 p) {
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const BoundingBox& b = boxes[i];
      if (p.x < b.lo.x || p.x > b.hi.x || p.y < b.lo.y || p.y > b.hi.y) continue;
      if (point_in_ring(p, layout.polygons[i])) return true;
    }
    return false;
  };

  const double mean_bs = bs_density * kPi * radius * radius;
  std::vector<double> result(trials, -1.0);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Philox4x32 rng(trial_seed(seed, trial), 0);
    Point2 user;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10000) throw std::runtime_error("no street position found for the user");
      user = {box.lo.x + radius + (box.width() - 2.0 * radius) * rng.uniform(),
              box.lo.y + radius + (box.height() - 2.0 * radius) * rng.uniform()};
      if (!inside_building(user)) break;
    }
    std::poisson_distribution<long long> count(mean_bs > 0.0 ? mean_bs : 1.0);
    const long long n = mean_bs > 0.0 ? count(rng) : 0;
    std::vector<std::pair<double, Point2>> bs;
    bs.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      double u;
      double v;
      do {
        u = 2.0 * rng.uniform() - 1.0;
        v = 2.0 * rng.uniform() - 1.0;
      } while (u * u + v * v > 1.0);
      bs.push_back({radius * radius * (u * u + v * v),
                    {user.x + radius * u, user.y + radius * v}});
    }
    std::sort(bs.begin(), bs.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [d2, p] : bs) {
      if (!index.blocked(user, p)) {
        result[trial] = std::sqrt(d2);
        break;
      }
    }
  });

  EmpiricalDistribution out;
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

Calibration calibrate_correction_factor(const SegmentSet& set, double target_mean_rate,
                                        double bs_density, const RadioParams& radio,
                                        double radius, std::size_t trials,
                                        std::uint64_t seed, unsigned threads, double lo,
                                        double hi, double tolerance) {
  if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("calibration bracket must satisfy 0 < lo < hi");
  SegmentSet raw = set;
  raw.correction_factor = 1.0;
  const BlockageStats base = estimate_stats(raw, OrientationFilter::axis);
  auto mean_rate = [&](double factor) {
    BlockageStats s = base;
    s.blockage_density *= factor;
    const NetworkParams p = synthetic_params(s, bs_density, set.axis);
    const SimWindow w = SimWindow::for_params(p, radius);
    SimOptions options;
    options.threads = threads;
    return empirical_mean(empirical_rate_samples(p, w, radio, trials, seed, options));
  };
  // A larger factor means more blockages and a lower mean rate.
  Calibration out;
  out.target_mean_rate = target_mean_rate;
  double r_lo = mean_rate(lo);
  double r_hi = mean_rate(hi);
  if (target_mean_rate > r_lo || target_mean_rate < r_hi) {
    throw std::domain_error("calibration target outside the rates reachable in the bracket");
  }
  while (hi - lo > tolerance * lo && out.iterations < 60) {
    const double mid = 0.5 * (lo + hi);
    const double r_mid = mean_rate(mid);
    ++out.iterations;
    if (r_mid > target_mean_rate) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
      r_hi = r_mid;
    }
  }
  // Linear interpolation inside the last bracket.
  const double w = r_lo > r_hi ? (r_lo - target_mean_rate) / (r_lo - r_hi) : 0.5;
  out.correction_factor = lo + w * (hi - lo);
  out.synthetic_mean_rate = mean_rate(out.correction_factor);
  return out;
}

}  // namespace blockgeom
