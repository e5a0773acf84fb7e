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

#include "blockgeom/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace blockgeom {
namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  // Shortest %g form that reads back to the same value.
  char buf[40];
  if (v == std::trunc(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double parse_double(const std::string& key, std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view text) {
  const std::string_view s = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

std::string parse_string(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  std::string_view s = trim(text);
  if (s.empty()) return out;
  for (;;) {
    const auto comma = s.find(',');
    out.push_back(parse_double(key, s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::string_view format_name(LayoutFormat f) noexcept {
  return f == LayoutFormat::json_polygons ? "json-polygons" : "csv-segments";
}

struct Key {
  std::string name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define BG_DOUBLE(key, field)                                                      \
  Key {                                                                            \
    key, [](ExperimentConfig& c, std::string_view v) { c.field = parse_double(key, v); }, \
        [](const ExperimentConfig& c) { return format_double(c.field); }           \
  }
#define BG_SIZE(key, field)                                                                \
  Key {                                                                                    \
    key,                                                                                   \
        [](ExperimentConfig& c, std::string_view v) { c.field = parse_int<std::size_t>(key, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                  \
  }

const std::vector<Key>& key_table() {
  static const std::vector<Key> table = {
      BG_DOUBLE("network.bs_density", network.bs_density),
      BG_DOUBLE("network.blockage_density", network.blockage_density),
      BG_DOUBLE("network.length_min", network.length.min),
      BG_DOUBLE("network.length_max", network.length.max),
      BG_DOUBLE("network.orientation", network.orientation),
      BG_DOUBLE("radio.tx_power_dbm", radio.tx_power_dbm),
      BG_DOUBLE("radio.noise_dbm", radio.noise_dbm),
      BG_DOUBLE("radio.ref_loss_db", radio.ref_loss_db),
      BG_DOUBLE("radio.path_loss_exponent", radio.path_loss_exponent),
      Key{"heights.enabled",
          [](ExperimentConfig& c, std::string_view v) {
            c.use_heights = parse_bool("heights.enabled", v);
          },
          [](const ExperimentConfig& c) { return std::string(c.use_heights ? "true" : "false"); }},
      BG_DOUBLE("heights.bs", height.bs_height),
      BG_DOUBLE("heights.user", height.user_height),
      BG_DOUBLE("window.radius", window.radius),
      Key{"window.margin",
          [](ExperimentConfig& c, std::string_view v) {
            if (trim(v) == "auto") {
              c.auto_margin = true;
            } else {
              c.auto_margin = false;
              c.window.margin = parse_double("window.margin", v);
            }
          },
          [](const ExperimentConfig& c) {
            return c.auto_margin ? std::string("auto") : format_double(c.window.margin);
          }},
      BG_SIZE("sim.trials", trials),
      Key{"sim.seed",
          [](ExperimentConfig& c, std::string_view v) {
            c.seed = parse_int<std::uint64_t>("sim.seed", v);
          },
          [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      Key{"sim.threads",
          [](ExperimentConfig& c, std::string_view v) {
            c.threads = parse_int<unsigned>("sim.threads", v);
          },
          [](const ExperimentConfig& c) { return std::to_string(c.threads); }},
      BG_SIZE("quadrature.outer_x", quadrature.outer_x),
      BG_SIZE("quadrature.outer_phi", quadrature.outer_phi),
      BG_SIZE("quadrature.inner_t", quadrature.inner_t),
      BG_SIZE("quadrature.inner_omega", quadrature.inner_omega),
      BG_DOUBLE("quadrature.refinement", quadrature.refinement),
      BG_DOUBLE("quadrature.tolerance", quadrature.tolerance),
      BG_DOUBLE("grid.distance_max", grid.distance_max),
      BG_SIZE("grid.distance_points", grid.distance_points),
      BG_DOUBLE("grid.rate_min", grid.rate_min),
      BG_DOUBLE("grid.rate_max", grid.rate_max),
      BG_SIZE("grid.rate_points", grid.rate_points),
      BG_DOUBLE("grid.rate_distance_max", grid.rate_distance_max),
      BG_SIZE("grid.rate_distance_points", grid.rate_distance_points),
      Key{"sweep.blockage_densities",
          [](ExperimentConfig& c, std::string_view v) {
            c.sweep_densities = parse_list("sweep.blockage_densities", v);
          },
          [](const ExperimentConfig& c) { return format_list(c.sweep_densities); }},
      Key{"ingest.layout",
          [](ExperimentConfig& c, std::string_view v) { c.ingest.layout = parse_string(v); },
          [](const ExperimentConfig& c) { return c.ingest.layout; }},
      Key{"ingest.format",
          [](ExperimentConfig& c, std::string_view v) {
            try {
              c.ingest.format = parse_layout_format(parse_string(v));
            } catch (const std::invalid_argument& e) {
              throw ConfigError("ingest.format", e.what());
            }
          },
          [](const ExperimentConfig& c) { return std::string(format_name(c.ingest.format)); }},
      BG_DOUBLE("ingest.axis", ingest.axis),
      BG_DOUBLE("ingest.correction_factor", ingest.correction_factor),
      BG_DOUBLE("ingest.radius", ingest.radius),
      Key{"output.dir",
          [](ExperimentConfig& c, std::string_view v) { c.output_dir = parse_string(v); },
          [](const ExperimentConfig& c) { return c.output_dir; }},
      Key{"output.unit",
          [](ExperimentConfig& c, std::string_view v) {
            try {
              c.unit = parse_rate_unit(parse_string(v));
            } catch (const std::invalid_argument& e) {
              throw ConfigError("output.unit", e.what());
            }
          },
          [](const ExperimentConfig& c) { return std::string(to_string(c.unit)); }},
  };
  return table;
}

#undef BG_DOUBLE
#undef BG_SIZE

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

std::string_view to_string(RateUnit unit) noexcept {
  return unit == RateUnit::bits ? "bits" : "nats";
}

RateUnit parse_rate_unit(std::string_view name) {
  if (name == "nats") return RateUnit::nats;
  if (name == "bits") return RateUnit::bits;
  throw std::invalid_argument("unknown rate unit '" + std::string(name) +
                              "' (expected nats or bits)");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const Key& k : key_table()) out.push_back(k.name);
    return out;
  }();
  return keys;
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string_view, const Key*> lookup;
  for (const Key& k : key_table()) lookup[k.name] = &k;

  ExperimentConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const auto it = lookup.find(key);
    if (it == lookup.end()) throw ConfigError(key, "unknown key (" + where + ")");
    if (!cfg.user_set.insert(key).second) throw ConfigError(key, "set twice (" + where + ")");
    it->second->set(cfg, line.substr(eq + 1));
  }
  check_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void check_config(ExperimentConfig& cfg) {
  const NetworkParams& n = cfg.network;
  require(std::isfinite(n.bs_density) && n.bs_density >= 0.0, "network.bs_density", "must be >= 0");
  require(std::isfinite(n.blockage_density) && n.blockage_density >= 0.0,
          "network.blockage_density", "must be >= 0");
  require(n.length.min >= 0.0, "network.length_min", "must be >= 0");
  require(n.length.min < n.length.max, "network.length_min",
          "must be below network.length_max (" + format_double(n.length.max) + ")");
  require(cfg.radio.path_loss_exponent > 0.0, "radio.path_loss_exponent", "must be > 0");
  if (cfg.use_heights) {
    require(cfg.height.user_height >= 0.0, "heights.user", "must be >= 0");
    require(cfg.height.bs_height >= cfg.height.user_height, "heights.bs",
            "must be >= heights.user");
  }
  require(cfg.window.radius > 0.0, "window.radius", "must be > 0");
  if (cfg.auto_margin) cfg.window.margin = 0.5 * n.length.max;
  require(cfg.window.margin >= 0.5 * n.length.max, "window.margin",
          "must be at least half of network.length_max");
  require(cfg.trials >= 1, "sim.trials", "must be >= 1");
  const QuadratureSpec& q = cfg.quadrature;
  require(q.outer_x >= 8, "quadrature.outer_x", "must be >= 8");
  require(q.outer_phi >= 8, "quadrature.outer_phi", "must be >= 8");
  require(q.inner_t >= 8, "quadrature.inner_t", "must be >= 8");
  require(q.inner_omega >= 8, "quadrature.inner_omega", "must be >= 8");
  require(q.refinement > 1.0, "quadrature.refinement", "must be > 1");
  require(q.tolerance > 0.0, "quadrature.tolerance", "must be > 0");
  const GridSpec& g = cfg.grid;
  require(g.distance_max > 0.0, "grid.distance_max", "must be > 0");
  require(g.distance_points >= 2, "grid.distance_points", "must be >= 2");
  require(g.rate_min > 0.0, "grid.rate_min", "must be > 0");
  require(g.rate_max > g.rate_min, "grid.rate_max", "must exceed grid.rate_min");
  require(g.rate_points >= 2, "grid.rate_points", "must be >= 2");
  require(g.rate_distance_max > 0.0, "grid.rate_distance_max", "must be > 0");
  require(g.rate_distance_points >= 2, "grid.rate_distance_points", "must be >= 2");
  require(!cfg.sweep_densities.empty(), "sweep.blockage_densities", "must not be empty");
  for (const double v : cfg.sweep_densities) {
    require(v >= 0.0, "sweep.blockage_densities", "entries must be >= 0");
  }
  require(cfg.ingest.correction_factor > 0.0, "ingest.correction_factor", "must be > 0");
  require(cfg.ingest.radius > 0.0, "ingest.radius", "must be > 0");
}

std::string format_config(const ExperimentConfig& cfg, bool provenance) {
  std::string out;
  for (const Key& k : key_table()) {
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    if (provenance) out += cfg.user_set.count(k.name) ? "  # user" : "  # default";
    out += '\n';
  }
  return out;
}

ExperimentConfig validate_config(const std::filesystem::path& path) { return load_config(path); }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Key& k : key_table()) {
    if (k.name == "sim.threads" || k.name == "output.dir") continue;
    const std::string line = k.name + "=" + k.get(cfg) + "\n";
    for (const unsigned char ch : line) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace blockgeom
