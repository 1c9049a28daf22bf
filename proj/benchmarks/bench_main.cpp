// Copyright 2026 The lef Authors
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

#include <random>

#include "lef/dataset.hpp"
#include "lef/eval.hpp"
#include "lef/knn.hpp"
#include "lef/methods.hpp"
#include "lef/similarity.hpp"

namespace {

lef::Matrix points(std::size_t m, std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  lef::Matrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < n; ++c) out(i, c) = z(rng);
  }
  return out;
}

void BM_NeighborIndex(benchmark::State& state) {
  const auto x = points(static_cast<std::size_t>(state.range(0)), 9);
  for (auto _ : state) benchmark::DoNotOptimize(lef::build_neighbor_index(x, 30, {1}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NeighborIndex)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_BhSneGraph(benchmark::State& state) {
  const auto index = lef::build_neighbor_index(points(1000, 9), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lef::build_bh_sne_graph(index, {1}));
}
BENCHMARK(BM_BhSneGraph)->Arg(3)->Arg(30)->Arg(100);

void BM_UmapGraph(benchmark::State& state) {
  const auto index = lef::build_neighbor_index(points(1000, 9), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lef::build_umap_graph(index, {1}));
}
BENCHMARK(BM_UmapGraph)->Arg(3)->Arg(30)->Arg(100);

void BM_Score(benchmark::State& state) {
  const auto x = points(1000, 9);
  const auto index = lef::build_neighbor_index(x, 30);
  const auto method = lef::all_methods()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(lef::method_name(method)));
  for (auto _ : state) {
    lef::ScoreEngine engine(x, index, {1});
    benchmark::DoNotOptimize(engine.score(method));
  }
}
BENCHMARK(BM_Score)->DenseRange(0, 10);

void BM_TrialSweep(benchmark::State& state) {
  const auto d = lef::gen_gaussian_with_planted_outlier(205, 9, 3.0, 1);
  const auto trial = lef::make_outlier_trials(d).front();
  const auto ks = lef::parse_k_list("3..100");
  for (auto _ : state) benchmark::DoNotOptimize(lef::sweep_k(trial, lef::Method::ulef, ks, {1}));
}
BENCHMARK(BM_TrialSweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
