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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "blockgeom/analytic.hpp"
#include "blockgeom/distance_cdf.hpp"
#include "blockgeom/geometry.hpp"
#include "blockgeom/simulate.hpp"

namespace bg = blockgeom;

static void BM_UnionArea(benchmark::State& state) {
  double phi = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg::union_area(30.0, 120.0, phi, 90.0, phi + 0.4));
    phi += 1e-7;
  }
}
BENCHMARK(BM_UnionArea);

static void BM_ExpectedBlockersPair(benchmark::State& state) {
  const bg::UniformLength length{0.0, 57.0};
  double t = 80.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg::expected_blockers_pair(120.0, 0.7, t, 1.1, 1.9e-3, length));
    t += 1e-6;
  }
}
BENCHMARK(BM_ExpectedBlockersPair);

static void BM_CorrelatedCdf(benchmark::State& state) {
  const bg::NetworkParams p;
  bg::QuadratureSpec q;
  q.outer_x = q.outer_phi = q.inner_t = q.inner_omega = static_cast<std::size_t>(state.range(0));
  const std::vector<double> grid = bg::uniform_grid(0.0, 300.0, 31);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg::cdf_distance_correlated(grid, p, q, 1));
  }
}
BENCHMARK(BM_CorrelatedCdf)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SimulateTrial(benchmark::State& state) {
  const bg::NetworkParams p;
  const bg::SimWindow w = bg::SimWindow::for_params(p);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg::nearest_visible_distance(p, w, bg::trial_seed(11, trial++)));
  }
}
BENCHMARK(BM_SimulateTrial)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
