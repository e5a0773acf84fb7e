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

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "blockgeom/config.hpp"

namespace blockgeom {

inline constexpr const char* kToolVersion = "0.1.0";

/// Rectangular numeric table with a metadata block, written as CSV.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  /// False when any quadrature behind the table missed its tolerance.
  bool converged = true;
  std::vector<std::string> diagnostics;

  /// Throws std::invalid_argument if the row width differs from columns.
  void add_row(std::vector<double> row);
  void set_meta(const std::string& key, const std::string& value);

  /// '#'-prefixed "key: value" lines, the header, then one line per row with
  /// 9 significant digits.
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

/// Columns d, F_noblockage, F_independent, F_correlated, F_empirical.
ResultTable run_distance_cdf(const ExperimentConfig& cfg);

/// Columns r, F_rate_bound, F_rate_empirical. The bound uses the correlated
/// distance CDF; r is printed in the configured unit.
ResultTable run_rate_cdf(const ExperimentConfig& cfg);

/// Columns lambda_b, mean_rate_bound_analytic, mean_rate_empirical_synthetic
/// and, with a layout, mean_rate_empirical_ingested. The ingested column
/// subsamples the layout to each density after applying the correction
/// factor; densities above the full layout's print as nan.
ResultTable run_avg_rate_sweep(const ExperimentConfig& cfg,
                               const std::vector<double>& blockage_densities,
                               const std::optional<std::string>& layout_path = std::nullopt);

/// Per-direction segment statistics of cfg.ingest.layout: columns family
/// (0 axis, 1 perpendicular, 2 both), count, mean_length, blockage_density.
ResultTable run_ingest_stats(const ExperimentConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast consistency checks of every module, a few seconds in total.
std::vector<CheckResult> run_selfcheck(unsigned threads = 1);

}  // namespace blockgeom
