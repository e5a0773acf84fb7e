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

// blockgeom: run the blockage-geometry experiments from a config file.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "blockgeom/config.hpp"
#include "blockgeom/experiment.hpp"
#include "blockgeom/ingest.hpp"
#include "blockgeom/parallel.hpp"

namespace fs = std::filesystem;
using namespace blockgeom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct GlobalFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string unit;
};

ExperimentConfig effective_config(const GlobalFlags& flags) {
  ExperimentConfig cfg = flags.config.empty() ? parse_config("") : load_config(flags.config);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (!flags.unit.empty()) cfg.unit = parse_rate_unit(flags.unit);
  return cfg;
}

int emit(const ResultTable& table, const ExperimentConfig& cfg, const std::string& name) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitRuntime;
  }
  table.write_csv(out);
  std::cerr << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
  for (const auto& d : table.diagnostics) std::cerr << "diagnostic: " << d << "\n";
  return table.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blockage geometry: distance and rate distributions under parallel blockages"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  app.add_option("--config", flags.config, "Experiment config (key = value)");
  app.add_option("--out", flags.out, "Output directory (overrides output.dir)");
  app.add_option("--seed", flags.seed, "Seed (overrides sim.seed)");
  app.add_option("--threads", flags.threads,
                 "Worker threads; 0 uses BLOCKAGE_GEOM_THREADS. Never changes results");
  app.add_option("--unit", flags.unit, "Rate unit (overrides output.unit)")
      ->check(CLI::IsMember({"nats", "bits"}));

  auto* distance = app.add_subcommand("distance-cdf", "Distance CDFs: closed forms, correlated, empirical");
  auto* rate = app.add_subcommand("rate-cdf", "Rate-bound CDF against the empirical rate CDF");
  auto* sweep = app.add_subcommand("avg-rate-sweep", "Mean rate over a blockage-density sweep");
  std::vector<double> densities;
  std::string sweep_layout;
  sweep->add_option("--densities", densities, "Blockage densities (overrides sweep.blockage_densities)")
      ->delimiter(',');
  sweep->add_option("--layout", sweep_layout, "Ingested layout to add as a column (overrides ingest.layout)");
  auto* stats = app.add_subcommand("ingest-stats", "Segment statistics of an ingested layout");
  std::string stats_layout;
  stats->add_option("--layout", stats_layout, "Layout file (overrides ingest.layout)");
  auto* selfcheck = app.add_subcommand("selfcheck", "Fast consistency checks");
  auto* validate = app.add_subcommand("validate-config", "Print the effective config with provenance");
  auto* grid = app.add_subcommand("grid-layout", "Write a synthetic Manhattan-grid polygon layout");
  ManhattanSpec spec;
  std::string grid_out = "manhattan_grid.json";
  grid->add_option("--extent", spec.extent, "Side of the square region (m)");
  grid->add_option("--block", spec.block, "Block side (m)");
  grid->add_option("--street", spec.street, "Street width (m)");
  grid->add_option("--lots", spec.lots_per_side, "Lots per block side");
  grid->add_option("--setback", spec.max_setback, "Maximum building setback (m)");
  grid->add_option("--grid-seed", spec.seed, "Seed of the setbacks");
  grid->add_option("--file", grid_out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grid) {
      const BuildingLayout layout = manhattan_grid(spec);
      std::ofstream out(grid_out, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << grid_out << "\n";
        return kExitRuntime;
      }
      out << polygons_to_json(layout);
      std::cerr << "wrote " << grid_out << " (" << layout.polygons.size() << " polygons)\n";
      return kExitOk;
    }
    if (*selfcheck) {
      int failed = 0;
      const unsigned threads = flags.threads.value_or(0);
      for (const CheckResult& c : run_selfcheck(resolve_threads(static_cast<int>(threads)))) {
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        failed += c.passed ? 0 : 1;
      }
      return failed == 0 ? kExitOk : kExitNotConverged;
    }

    ExperimentConfig cfg = effective_config(flags);
    if (*validate) {
      std::cout << format_config(cfg);
      return kExitOk;
    }
    if (*distance) return emit(run_distance_cdf(cfg), cfg, "distance_cdf.csv");
    if (*rate) return emit(run_rate_cdf(cfg), cfg, "rate_cdf.csv");
    if (*sweep) {
      if (!densities.empty()) cfg.sweep_densities = densities;
      if (!sweep_layout.empty()) cfg.ingest.layout = sweep_layout;
      std::optional<std::string> layout;
      if (!cfg.ingest.layout.empty()) layout = cfg.ingest.layout;
      return emit(run_avg_rate_sweep(cfg, cfg.sweep_densities, layout), cfg, "avg_rate_sweep.csv");
    }
    if (*stats) {
      if (!stats_layout.empty()) cfg.ingest.layout = stats_layout;
      const ResultTable table = run_ingest_stats(cfg);
      table.write_csv(std::cout);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "layout parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnitError& e) {
    std::cerr << "layout unit error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
