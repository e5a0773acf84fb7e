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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockgeom/geometry.hpp"
#include "blockgeom/ingest.hpp"
#include "blockgeom/simulate.hpp"

using namespace blockgeom;

namespace {

std::string rectangle_json(double x0, double y0, double w, double h, double angle = 0.0) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double xs[4] = {0.0, w, w, 0.0};
  const double ys[4] = {0.0, 0.0, h, h};
  std::string out = "[[";
  for (int i = 0; i < 4; ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s[%.17g, %.17g]", i ? ", " : "", x0 + c * xs[i] - s * ys[i],
                  y0 + s * xs[i] + c * ys[i]);
    out += buf;
  }
  return out + "]]";
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

SegmentSet uniform_set(std::size_t n, double length, double area, double factor) {
  std::vector<Blockage> b(n, Blockage{{0.0, 0.0}, length, 0.0});
  return make_segment_set(std::move(b), area, 0.0, factor);
}

}  // namespace

TEST_CASE("unit square parses with its bounding box") {
  const BuildingLayout layout = parse_polygons_json("[[[0,0],[1,0],[1,1],[0,1],[0,0]]]");
  REQUIRE(layout.polygons.size() == 1);
  CHECK(layout.polygons[0].size() == 4);
  CHECK(layout.bbox.lo == Point2{0.0, 0.0});
  CHECK(layout.bbox.hi == Point2{1.0, 1.0});
  CHECK(ring_area(layout.polygons[0]) == doctest::Approx(1.0));
  CHECK(layout.warnings.empty());
}

TEST_CASE("object form with explicit units") {
  const auto layout =
      parse_polygons_json(R"({"units": "m", "polygons": [[[0,0],[2,0],[2,3],[0,3]]]})");
  CHECK(layout.bbox.area() == doctest::Approx(6.0));
  CHECK_THROWS_AS(parse_polygons_json(R"({"units": "deg", "polygons": []})"), UnitError);
}

TEST_CASE("malformed layouts are rejected") {
  CHECK_THROWS_AS(parse_polygons_json(""), ParseError);
  CHECK_THROWS_AS(parse_polygons_json("{not json"), ParseError);
  CHECK_THROWS_AS(parse_polygons_json("[[[0,0],[1,0]]]"), ParseError);
  CHECK_THROWS_AS(parse_polygons_json("[[[0,0],[1,\"a\"],[1,1]]]"), ParseError);
  CHECK_THROWS_AS(parse_polygons_json("[[[0,0,0],[1,0,0],[1,1,0]]]"), UnitError);
  // Bow tie.
  CHECK_THROWS_AS(parse_polygons_json("[[[0,0],[1,1],[1,0],[0,1]]]"), ParseError);
  try {
    parse_polygons_json("[[[0,0],[1,0],[1,1]], [[0,0],[1,0],[\"x\",1]]]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("1") != std::string::npos);
    CHECK(what.find("vertex 2") != std::string::npos);
  }
  const auto empty = temp_file("blockgeom_empty_layout.json", "");
  CHECK_THROWS_AS(load_layout(empty, LayoutFormat::json_polygons), ParseError);
  std::filesystem::remove(empty);
}

TEST_CASE("explicit study region") {
  const auto layout = parse_polygons_json(
      R"({"units": "m", "bbox": [[-5, -5], [10, 10]], "polygons": [[[0,0],[1,0],[1,1]]]})");
  CHECK(layout.bbox.lo == Point2{-5.0, -5.0});
  CHECK(layout.bbox.area() == doctest::Approx(225.0));
  CHECK_THROWS_AS(parse_polygons_json(
                      R"({"bbox": [[0.5, 0], [10, 10]], "polygons": [[[0,0],[1,0],[1,1]]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_polygons_json(R"({"bbox": [[0, 0]], "polygons": []})"), ParseError);
}

TEST_CASE("degenerate ring is kept with a warning") {
  const auto layout = parse_polygons_json("[[[0,0],[1,0],[2,0]]]");
  REQUIRE(layout.warnings.size() == 1);
  CHECK(layout.warnings[0].find("zero area") != std::string::npos);
}

TEST_CASE("ring utilities") {
  const Ring square{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(ring_area(square) == doctest::Approx(4.0));
  CHECK(ring_is_simple(square));
  CHECK(point_in_ring({1.0, 1.0}, square));
  CHECK_FALSE(point_in_ring({3.0, 1.0}, square));
  const Ring bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(ring_is_simple(bowtie));
}

TEST_CASE("rectangle becomes four snapped segments") {
  const auto layout = parse_polygons_json(rectangle_json(10.0, 20.0, 30.0, 12.0));
  const SegmentSet set = polygons_to_segments(layout, 0.0);
  REQUIRE(set.segments.size() == 4);
  CHECK(set.direction[0].count == 2);
  CHECK(set.direction[1].count == 2);
  CHECK(set.direction[0].mean_length == doctest::Approx(30.0));
  CHECK(set.direction[1].mean_length == doctest::Approx(12.0));
  CHECK(set.region_area == doctest::Approx(360.0));
  std::set<std::pair<double, double>> centers;
  for (const Blockage& b : set.segments) centers.insert({b.center.x, b.center.y});
  CHECK(centers.count({25.0, 20.0}) == 1);
  CHECK(centers.count({40.0, 26.0}) == 1);
  CHECK(set.warnings.empty());
}

TEST_CASE("slightly rotated footprint keeps its edge lengths") {
  const double angle = 5.0 * kPi / 180.0;
  const auto layout = parse_polygons_json(rectangle_json(0.0, 0.0, 40.0, 10.0, angle));
  const SegmentSet set = polygons_to_segments(layout, 0.0);
  CHECK(set.direction[0].mean_length == doctest::Approx(40.0));
  CHECK(set.direction[1].mean_length == doctest::Approx(10.0));
  for (const Blockage& b : set.segments) {
    const double rel = std::fmod(std::abs(b.orientation), 0.5 * kPi);
    CHECK(rel == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(set.warnings.empty());

  const auto skewed =
      parse_polygons_json(rectangle_json(0.0, 0.0, 40.0, 10.0, 20.0 * kPi / 180.0));
  CHECK(polygons_to_segments(skewed, 0.0).warnings.size() == 1);
}

TEST_CASE("L-shaped footprint splits evenly between the two families") {
  const auto layout = parse_polygons_json("[[[0,0],[20,0],[20,10],[10,10],[10,30],[0,30]]]");
  const SegmentSet set = polygons_to_segments(layout, 0.0);
  CHECK(set.direction[0].count == 3);
  CHECK(set.direction[1].count == 3);
  CHECK(set.direction[0].mean_length == doctest::Approx(40.0 / 3.0));
  CHECK(set.direction[1].mean_length == doctest::Approx(20.0));
}

TEST_CASE("density estimation examples") {
  const BlockageStats plain = estimate_stats(uniform_set(100, 30.0, 1e5, 1.0));
  CHECK(plain.blockage_density == doctest::Approx(1e-3));
  CHECK(plain.mean_length == doctest::Approx(30.0));
  CHECK(plain.count == 100);

  const BlockageStats corrected = estimate_stats(uniform_set(100, 30.0, 1e5, 1.7));
  CHECK(corrected.blockage_density == doctest::Approx(1.7e-3));
  CHECK(corrected.mean_length == doctest::Approx(30.0));

  // Linear in the factor and inverse in the area.
  CHECK(estimate_stats(uniform_set(100, 30.0, 2e5, 3.4)).blockage_density ==
        doctest::Approx(1.7e-3));

  CHECK_THROWS_AS(estimate_stats(uniform_set(10, 30.0, 0.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(estimate_stats(uniform_set(10, 30.0, 1e4, 1.0), OrientationFilter::perpendicular),
                  std::domain_error);
  CHECK_THROWS_AS(uniform_set(10, 30.0, 1e4, 0.0), std::invalid_argument);
}

TEST_CASE("density estimation recovers a simulated segment process") {
  NetworkParams p;
  p.blockage_density = 1.0e-3;
  const SimWindow w = SimWindow::for_params(p, 600.0);
  const Layout layout = gen_layout(p, w, 99);
  const double outer = w.radius + w.margin;
  const double area = kPi * outer * outer;
  const SegmentSet set = make_segment_set(layout.blockages, area, 0.0, 1.0);
  const BlockageStats stats = estimate_stats(set);
  const double n = static_cast<double>(stats.count);
  CHECK(std::abs(stats.blockage_density - p.blockage_density) <
        3.0 * std::sqrt(p.blockage_density * area) / area);
  const double sd_len = (p.length.max - p.length.min) / std::sqrt(12.0 * n);
  CHECK(std::abs(stats.mean_length - p.mean_length()) < 3.0 * sd_len);
}

TEST_CASE("subsampling") {
  ManhattanSpec spec;
  spec.extent = 1200.0;
  const BuildingLayout layout = manhattan_grid(spec);
  const std::size_t n = layout.item_count();
  REQUIRE(n > 200);
  CHECK(subsample(layout, 1.0, 3).item_count() == n);
  CHECK(subsample(layout, 0.0, 3).item_count() == 0);
  const auto half = subsample(layout, 0.5, 3);
  const double sd = std::sqrt(0.25 * static_cast<double>(n));
  CHECK(std::abs(static_cast<double>(half.item_count()) - 0.5 * n) < 3.0 * sd);
  CHECK(half.bbox.lo == layout.bbox.lo);
  CHECK(half.bbox.hi == layout.bbox.hi);
  CHECK_THROWS_AS(subsample(layout, 1.5, 3), std::invalid_argument);

  // Selections under different seeds are independent: 2x2 chi-square test.
  const auto other = subsample(layout, 0.5, 4);
  auto key = [](const Ring& r) { return std::make_pair(r[0].x, r[0].y); };
  std::set<std::pair<double, double>> in_a;
  std::set<std::pair<double, double>> in_b;
  for (const Ring& r : half.polygons) in_a.insert(key(r));
  for (const Ring& r : other.polygons) in_b.insert(key(r));
  double table[2][2] = {{0, 0}, {0, 0}};
  for (const Ring& r : layout.polygons) {
    table[in_a.count(key(r))][in_b.count(key(r))] += 1.0;
  }
  double chi2 = 0.0;
  const double total = static_cast<double>(layout.polygons.size());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double row = table[i][0] + table[i][1];
      const double col = table[0][j] + table[1][j];
      const double expected = row * col / total;
      chi2 += (table[i][j] - expected) * (table[i][j] - expected) / expected;
    }
  }
  CHECK(chi2 < 10.83);
}

TEST_CASE("segment CSV parsing") {
  const auto layout = parse_segments_csv(
      "# cx,cy,length,orientation\n"
      "1.5, 2.0, 10, 0\n"
      "\n"
      "-3,4,0,1.5707963267948966\n");
  REQUIRE(layout.segments.size() == 2);
  CHECK(layout.segments[0].center == Point2{1.5, 2.0});
  CHECK(layout.segments[0].length == 10.0);
  CHECK(layout.segments[1].orientation == doctest::Approx(0.5 * kPi));
  try {
    parse_segments_csv("1,2,3,0\n1,2,-3,0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_segments_csv("1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_segments_csv("# only a comment\n"), ParseError);
  CHECK(parse_layout_format("csv-segments") == LayoutFormat::csv_segments);
  CHECK(parse_layout_format("json-polygons") == LayoutFormat::json_polygons);
  CHECK_THROWS_AS(parse_layout_format("shapefile"), std::invalid_argument);
}

TEST_CASE("polygon JSON round trip") {
  const auto layout = manhattan_grid(ManhattanSpec{});
  const auto again = parse_polygons_json(polygons_to_json(layout));
  CHECK(again.polygons == layout.polygons);
  CHECK(again.bbox.lo == layout.bbox.lo);
  CHECK(again.bbox.hi == layout.bbox.hi);
}

TEST_CASE("manhattan grid is deterministic and axis aligned") {
  ManhattanSpec spec;
  const auto a = manhattan_grid(spec);
  const auto b = manhattan_grid(spec);
  CHECK(a.polygons == b.polygons);
  const SegmentSet set = polygons_to_segments(a, 0.0);
  CHECK(set.warnings.empty());
  CHECK(set.direction[0].count == set.direction[1].count);
  spec.lots_per_side = 0;
  CHECK_THROWS_AS(manhattan_grid(spec), std::invalid_argument);
}

TEST_CASE("ingested simulation is reproducible and stays on the streets") {
  ManhattanSpec spec;
  spec.extent = 1200.0;
  const auto layout = manhattan_grid(spec);
  const SegmentSet set = polygons_to_segments(layout, 0.0);
  const auto a = ingested_distance_samples(layout, set, 1e-4, 300.0, 200, 5);
  const auto b = ingested_distance_samples(layout, set, 1e-4, 300.0, 200, 5, 2);
  CHECK(a.samples == b.samples);
  CHECK(a.trials() == 200);
  CHECK(a.samples.size() > 100);
  CHECK_THROWS_AS(ingested_distance_samples(layout, set, 1e-4, 700.0, 10, 5),
                  std::invalid_argument);
}
