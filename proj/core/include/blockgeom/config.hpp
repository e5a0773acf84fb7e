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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blockgeom/analytic.hpp"
#include "blockgeom/ingest.hpp"
#include "blockgeom/rate.hpp"
#include "blockgeom/simulate.hpp"

namespace blockgeom {

/// Invalid configuration. The message starts with the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class RateUnit { nats, bits };

std::string_view to_string(RateUnit unit) noexcept;
/// "nats" or "bits"; throws std::invalid_argument otherwise.
RateUnit parse_rate_unit(std::string_view name);

struct GridSpec {
  /// Distance grid: `distance_points` uniform points over [0, distance_max].
  double distance_max = 300.0;
  std::size_t distance_points = 61;
  /// Rate grid: `rate_points` log-spaced rates over [rate_min, rate_max]
  /// nats. The unit option only rescales the printed abscissa.
  double rate_min = 1e-3;
  double rate_max = 20.0;
  std::size_t rate_points = 81;
  /// Distance range tabulated behind the rate-bound CDF.
  double rate_distance_max = 1000.0;
  std::size_t rate_distance_points = 201;
};

struct IngestSpec {
  std::string layout;  // empty: no ingested layout
  LayoutFormat format = LayoutFormat::json_polygons;
  double axis = 0.0;
  double correction_factor = kDefaultCorrectionFactor;
  /// Radius of the base-station disk around each user position.
  double radius = 800.0;
};

struct ExperimentConfig {
  NetworkParams network;
  RadioParams radio;
  /// Antenna heights apply only when `use_heights` is set.
  HeightParams height;
  bool use_heights = false;
  SimWindow window;
  /// window.margin = auto: half the longest blockage.
  bool auto_margin = true;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  /// 0 selects BLOCKAGE_GEOM_THREADS or a single worker. Never changes
  /// results.
  unsigned threads = 0;
  QuadratureSpec quadrature;
  GridSpec grid;
  std::vector<double> sweep_densities{0.0, 0.5e-3, 1.0e-3, 1.5e-3, 1.9e-3};
  IngestSpec ingest;
  std::string output_dir = ".";
  RateUnit unit = RateUnit::nats;

  /// Keys present in the parsed text; every other key holds its default.
  std::set<std::string> user_set;

  std::optional<HeightParams> heights() const {
    return use_heights ? std::optional<HeightParams>(height) : std::nullopt;
  }
};

/// Every accepted key, in canonical order.
const std::vector<std::string>& config_keys();

/// Parses flat "section.key = value" text. '#' starts a comment. Unknown
/// keys, malformed values and duplicate keys throw ConfigError; the parsed
/// config is then checked with check_config.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a config file.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Invariant checks with field paths. window.margin left at "auto" is set
/// to half the longest blockage.
void check_config(ExperimentConfig& cfg);

/// Effective config, one "key = value  # default|user" line per key. Values
/// print in shortest round-trip form, so parsing the output reproduces the
/// config exactly.
std::string format_config(const ExperimentConfig& cfg, bool provenance = true);

/// load_config plus check_config.
ExperimentConfig validate_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical config text, leaving out the keys that do
/// not affect results (threads and the output directory).
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace blockgeom
