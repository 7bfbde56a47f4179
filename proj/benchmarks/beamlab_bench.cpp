// Copyright 2026 The beamlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "beamlab/beams.hpp"
#include "beamlab/channel.hpp"
#include "beamlab/detection.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/sif.hpp"
#include "beamlab/vdban.hpp"
#include "beamlab/vdf.hpp"

namespace beamlab {
namespace {

struct Scene {
  ScenarioConfig config = ScenarioConfig::defaults();
  Scenario scenario;
  Snapshot snapshot;
  std::vector<Reflector> reflectors;
  std::vector<CameraMount> mounts;
  std::vector<Detection> detections;

  Scene() {
    scenario = spawn_scenario(7, config);
    snapshot = sample_trajectory(scenario).front();
    reflectors = scene_reflectors(scenario, snapshot);
    mounts = camera_ring_for(config);
    for (auto& cam : detect_vehicles(snapshot, mounts, {}, 11)) {
      detections.insert(detections.end(), cam.begin(), cam.end());
    }
  }
};

const Scene& scene() {
  static const Scene s;
  return s;
}

void BM_TracePaths(benchmark::State& state) {
  const Scene& s = scene();
  const ChannelConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        trace_paths(s.reflectors, s.config.rsu_position, s.snapshot.ms_antenna, cfg));
  }
}
BENCHMARK(BM_TracePaths);

void BM_SweepOptimal(benchmark::State& state) {
  const Scene& s = scene();
  const ChannelConfig cfg;
  const auto paths = trace_paths(s.reflectors, s.config.rsu_position, s.snapshot.ms_antenna, cfg);
  const ChannelMatrices h = assemble_channel(paths, cfg);
  const int n = static_cast<int>(state.range(0));
  const Codebook cb_tx = dft_codebook(cfg.num_bs_antennas, n);
  const Codebook cb_rx = dft_codebook(cfg.num_ms_antennas, n);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_optimal(h, cb_tx, cb_rx, cfg));
}
BENCHMARK(BM_SweepOptimal)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PairRatesFromPaths(benchmark::State& state) {
  const Scene& s = scene();
  const ChannelConfig cfg;
  const auto paths = trace_paths(s.reflectors, s.config.rsu_position, s.snapshot.ms_antenna, cfg);
  const Codebook cb_tx = dft_codebook(cfg.num_bs_antennas, 64);
  const Codebook cb_rx = dft_codebook(cfg.num_ms_antennas, 64);
  for (auto _ : state) benchmark::DoNotOptimize(pair_rates_from_paths(paths, cb_tx, cb_rx, cfg));
}
BENCHMARK(BM_PairRatesFromPaths)->Unit(benchmark::kMillisecond);

void BM_BuildVdf(benchmark::State& state) {
  const Scene& s = scene();
  const GridConfig grid = make_grid(s.config.lanes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_vdf(s.detections, s.mounts, s.snapshot.ms_location, grid));
  }
}
BENCHMARK(BM_BuildVdf);

void BM_BuildSif(benchmark::State& state) {
  const Scene& s = scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_sif(s.snapshot, s.mounts, s.detections, s.config.buildings));
  }
}
BENCHMARK(BM_BuildSif)->Unit(benchmark::kMillisecond);

VdbanModel bench_model(int grid_cells) {
  VdbanConfig cfg;
  cfg.grid_cells = grid_cells;
  cfg.num_classes = 100;
  cfg.head_hidden = {256, 256};
  return VdbanModel(cfg, 3);
}

struct Batch {
  Eigen::MatrixXd vdf, loc;
  std::vector<int> labels;
};

Batch random_batch(int rows, int grid_cells, int classes) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Batch b;
  b.vdf = Eigen::MatrixXd::NullaryExpr(rows, grid_cells * 4, [&] { return g(rng); });
  b.loc = Eigen::MatrixXd::NullaryExpr(rows, 2, [&] { return 5.0 * g(rng); });
  for (int i = 0; i < rows; ++i) b.labels.push_back(static_cast<int>(rng() % classes));
  return b;
}

void BM_VdbanForward(benchmark::State& state) {
  const int grid_cells = make_grid(scene().config.lanes).count();
  const VdbanModel m = bench_model(grid_cells);
  const Batch b = random_batch(static_cast<int>(state.range(0)), grid_cells, 100);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(b.vdf, b.loc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VdbanForward)->Arg(1)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_VdbanLossAndGrad(benchmark::State& state) {
  const int grid_cells = make_grid(scene().config.lanes).count();
  VdbanModel m = bench_model(grid_cells);
  const Batch b = random_batch(static_cast<int>(state.range(0)), grid_cells, 100);
  for (auto _ : state) benchmark::DoNotOptimize(m.loss_and_grad(b.vdf, b.loc, b.labels));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VdbanLossAndGrad)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace beamlab

BENCHMARK_MAIN();
