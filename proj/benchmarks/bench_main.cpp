// Copyright 2026 The meanfield Authors
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

#include "meanfield/cubic.hpp"
#include "meanfield/fokker_planck.hpp"
#include "meanfield/gaussian_closure.hpp"
#include "meanfield/particles.hpp"
#include "meanfield/rng.hpp"

namespace {

using namespace meanfield;

void BM_PhiloxBlock(benchmark::State& state) {
  Philox4x64Block c{0, 0, 0, 0};
  const Philox4x64Key k{0x1234, 0x5678};
  for (auto _ : state) {
    benchmark::DoNotOptimize(philox4x64(c, k));
    ++c[0];
  }
  state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_PhiloxBlock);

void BM_NormalCursor(benchmark::State& state) {
  NormalCursor cursor(RngStream{1, 2, 3});
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cursor.at(k++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalCursor);

void BM_ParticleStep(benchmark::State& state) {
  ModelParams p;
  p.theta = 2.9;
  p.sigma = 0.5;
  p.n_particles = static_cast<std::size_t>(state.range(0));
  p.dt = 1e-3;
  p.t_end = 1e9;
  p.threads = static_cast<unsigned>(state.range(1));
  ParticleEngine engine(p, RngStream{1, 0, 0});
  ParticleState s = split_state(p.n_particles);
  for (auto _ : state) engine.step(s);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParticleStep)->Args({1000, 1})->Args({100000, 1})->Args({100000, 4});

void BM_CubicRoots(benchmark::State& state) {
  const Mat3 a = gauss_jacobian_matrix({1.0, 0.0, 0.25}, 1.0, 2.9, 0.05);
  const CharPoly p = characteristic_polynomial(a);
  for (auto _ : state) benchmark::DoNotOptimize(cubic_roots(p));
}
BENCHMARK(BM_CubicRoots);

void BM_FpStep(benchmark::State& state) {
  const GridSpec grid{-4.0, 4.0, static_cast<std::size_t>(state.range(0))};
  ModelParams p;
  p.sigma = 0.5;
  p.dt = 0.5 * max_stable_dt(grid, 0.0);
  FpState s;
  s.density = normal_density(grid, 0.0, 0.3);
  for (auto _ : state) fp_step(s, p);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FpStep)->Arg(400)->Arg(1600);

}  // namespace

BENCHMARK_MAIN();
