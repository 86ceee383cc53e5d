// Copyright 2026 The gamelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gamelab/bsde.hpp"
#include "gamelab/hamiltonian.hpp"
#include "gamelab/lattice.hpp"
#include "gamelab/pde.hpp"
#include "gamelab/registry.hpp"
#include "gamelab/regression.hpp"
#include "gamelab/sde.hpp"

namespace gamelab {
namespace {

void BM_Minimax(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (double& v : m) v = n01(rng);
  for (auto _ : state) benchmark::DoNotOptimize(minimax(m, n, n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Minimax)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_UpperHamiltonian(benchmark::State& state) {
  const ScenarioSpec spec = load_scenario("barlow-game");
  const ActionGrid grid = ActionGrid::from(spec, 41, 41);
  const PointPath p(0.3, vec1(0.2));
  const HamiltonianQuery q = make_query(p, 0.3, vec1(1.0), Mat::Ones(1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(upper_H(spec, q, grid));
}
BENCHMARK(BM_UpperHamiltonian);

void BM_LatticeBackward(benchmark::State& state) {
  const ScenarioSpec spec = load_scenario("weak-drift-game");
  const int nx = static_cast<int>(state.range(0));
  const Lattice lat = build_lattice(spec, 16, nx, {8, 3.0, 3, 3});
  for (auto _ : state) benchmark::DoNotOptimize(backward(lat, spec));
}
BENCHMARK(BM_LatticeBackward)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_PdeSolve(benchmark::State& state) {
  const ScenarioSpec spec = load_scenario("barlow-game");
  const ActionGrid actions = ActionGrid::from(spec, 21, 2);
  const FdGrid grid = FdGrid::centered(spec, 2.0,
                                       static_cast<int>(state.range(0)), actions);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_isaacs(spec, grid, Side::kUpper, actions));
  }
}
BENCHMARK(BM_PdeSolve)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_RegressionFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  RegressionModel::Samples x(n, 2);
  Eigen::MatrixXd y(n, 3);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = n01(rng);
    x(i, 1) = n01(rng);
    y.row(i) << x(i, 0) * x(i, 1), n01(rng), 1.0;
  }
  const RegressionBasis basis = RegressionBasis::local_linear(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RegressionModel::fit(basis, x, y));
  }
}
BENCHMARK(BM_RegressionFit)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_SimulateSaddle(benchmark::State& state) {
  const ScenarioSpec spec = load_scenario("weak-drift-game");
  const SimConfig cfg{64, static_cast<int>(state.range(0)), 1, false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_feedback(spec, spec.saddle_laws->first,
                                               spec.saddle_laws->second, cfg));
  }
}
BENCHMARK(BM_SimulateSaddle)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gamelab

BENCHMARK_MAIN();
