// Copyright 2026 The comot Authors.
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

#include "comot/assignment.hpp"
#include "comot/metrics.hpp"
#include "comot/pipeline.hpp"
#include "comot/random.hpp"
#include "comot/simulator.hpp"
#include "comot/tracker.hpp"

namespace comot {
namespace {

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  CostMatrix m(n, n / 4 + 1);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-10, 10);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(m));
}
BENCHMARK(BM_Hungarian)->Arg(8)->Arg(60)->Arg(300);

void BM_AssignDetectionSets(benchmark::State& state) {
  const auto ns = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<SetPredictions> preds(60);
  for (auto& set : preds)
    for (std::size_t j = 0; j < ns; ++j)
      set.push_back({{rng.uniform(), rng.uniform(), 0.1, 0.1}, {rng.uniform()}});
  std::vector<GroundTruthObject> cands;
  for (TrackId k = 1; k <= 20; ++k) cands.push_back({k, {rng.uniform(), rng.uniform(), 0.1, 0.1}, 0});
  for (auto _ : state)
    benchmark::DoNotOptimize(assign_detection_sets(preds, cands, CostWeights{}, Reduction::kMax));
}
BENCHMARK(BM_AssignDetectionSets)->Arg(1)->Arg(3)->Arg(6);

void BM_PipelineFrame(benchmark::State& state) {
  RunConfig cfg;
  cfg.scene.frames = 20;
  cfg.oracle.p_corrupt = 0.1;
  const Scene scene = generate_scene(cfg.scene);
  const bool targets = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(scene, cfg, targets));
  state.SetItemsProcessed(state.iterations() * cfg.scene.frames);
}
BENCHMARK(BM_PipelineFrame)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  SceneConfig sc;
  sc.frames = static_cast<int>(state.range(0));
  const Scene scene = generate_scene(sc);
  const Tracklets gt = scene.ground_truth();
  RunConfig cfg;
  cfg.scene = sc;
  cfg.oracle.p_corrupt = 0.2;
  const Tracklets pred = run_pipeline(scene, cfg, false).tracklets;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(gt, pred, sc.image));
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace comot

BENCHMARK_MAIN();
