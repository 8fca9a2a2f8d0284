// Copyright 2026 The dynoc Authors. All Rights Reserved.
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

#include <memory>
#include <vector>

#include "dynoc/dynamics.hpp"
#include "dynoc/experts.hpp"
#include "dynoc/expfam.hpp"
#include "dynoc/forecaster.hpp"
#include "dynoc/losses.hpp"
#include "dynoc/rng.hpp"

namespace {

using namespace dynoc;

void BM_DmdStep(benchmark::State& st) {
  const auto n = static_cast<Eigen::Index>(st.range(0));
  CounterRng rng(1, "bench/dmd");
  const auto geom = MirrorGeometry::squared_euclidean(Box::uniform(n, -5.0, 5.0));
  Matrix a = Matrix::Identity(n, n) * 0.99;
  auto phi = std::make_shared<LinearDynamics>(a, geom.domain());
  std::vector<LossRound> rounds;
  for (int i = 0; i < 64; ++i) {
    Vector y(n);
    for (auto& v : y) v = rng.normal();
    rounds.push_back({y, std::make_shared<QuadraticLoss>(y)});
  }
  auto state = make_forecaster(geom, Vector::Zero(n), 0.5, phi);
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(dmd_step(state, rounds[i++ % rounds.size()]));
  }
}
BENCHMARK(BM_DmdStep)->Arg(4)->Arg(64)->Arg(512);

void BM_FixedShareUpdate(benchmark::State& st) {
  const auto experts = static_cast<std::size_t>(st.range(0));
  const auto geom = MirrorGeometry::squared_euclidean(Box::unbounded(1));
  std::vector<ForecasterState> pool_members;
  for (std::size_t i = 0; i < experts; ++i) pool_members.push_back(make_forecaster(geom, Vector::Zero(1), 1.0));
  ExpertPool pool(std::move(pool_members), 0.01, 0.5);
  CounterRng rng(2, "bench/fixed_share");
  std::vector<double> losses(experts);
  for (auto& l : losses) l = rng.uniform(0.0, 10.0);
  for (auto _ : st) {
    pool.fixed_share_update(losses);
    benchmark::DoNotOptimize(pool.weights().data());
  }
}
BENCHMARK(BM_FixedShareUpdate)->Arg(10)->Arg(100)->Arg(1000);

void BM_JointStep(benchmark::State& st) {
  const auto d = static_cast<Eigen::Index>(st.range(0));
  const auto fam = ExponentialFamily::poisson(d);
  const HawkesAdditive schedule(0.5, Vector::Constant(d, 1.0));
  const Box alpha_box = Box::uniform(d * d, 0.0, 1.0);
  CounterRng rng(3, "bench/joint");
  std::vector<Vector> history;
  for (int i = 0; i < 4096; ++i) {
    Vector x(d);
    for (auto& v : x) v = static_cast<double>(rng.poisson(1.0));
    history.push_back(x);
  }
  JointState state = make_joint_state(fam, Vector::Zero(d), Vector::Zero(d * d), 0.5, 0.1);
  for (auto _ : st) {
    if (state.t > history.size()) {
      st.PauseTiming();
      state = make_joint_state(fam, Vector::Zero(d), Vector::Zero(d * d), 0.5, 0.1);
      st.ResumeTiming();
    }
    benchmark::DoNotOptimize(joint_step(state, fam, schedule, alpha_box, History(history.data(), state.t)));
  }
}
BENCHMARK(BM_JointStep)->Arg(3)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
