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

#ifndef GAMELAB_SDE_HPP_
#define GAMELAB_SDE_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gamelab/control.hpp"
#include "gamelab/path.hpp"
#include "gamelab/scenario.hpp"

namespace gamelab {

struct SimConfig {
  int n_steps = 64;
  int n_paths = 10000;
  std::uint64_t seed = 1;
  bool antithetic = false;
};

enum class Scheme { kFeedbackOnState, kNoiseAdapted };
const char* to_string(Scheme scheme);

// Deterministic 64-bit mixing used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);
std::uint64_t derive_seed(std::uint64_t seed, const std::string& key);

// Per-path Gaussian stream keyed by (seed, path index); independent of the
// order in which paths are simulated.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path_index);
  double normal() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_;
};

// A batch of Euler paths on one uniform grid, stored as flat row-major
// arrays (path, step, coordinate).
class SimBatch {
 public:
  SimBatch(const ScenarioSpec& spec, const SimConfig& cfg, Scheme scheme);

  int n_paths() const { return n_paths_; }
  int n_steps() const { return n_steps_; }
  int dim() const { return dim_; }
  int action_dim0() const { return adim0_; }
  int action_dim1() const { return adim1_; }
  Scheme scheme() const { return scheme_; }
  bool antithetic() const { return antithetic_; }
  double dt() const { return dt_; }
  const std::vector<double>& grid() const { return grid_; }

  PathView path(int i, int step) const;
  PathView path(int i) const { return path(i, n_steps_); }
  PathView noise(int i, int step) const;
  Vec state(int i, int k) const;
  Vec brownian_increment(int i, int k) const;
  Action action0(int i, int k) const;
  Action action1(int i, int k) const;
  double weight(int i) const { return weights_[i]; }

  SamplePath sample_path(int i) const;

  // Mutable access for the simulators and reweighting.
  double* states_row(int i, int k);
  double* brownian_row(int i, int k);
  double* action0_row(int i, int k);
  double* action1_row(int i, int k);
  std::vector<double>& weights() { return weights_; }

 private:
  int n_paths_;
  int n_steps_;
  int dim_;
  int adim0_;
  int adim1_;
  double dt_;
  Scheme scheme_;
  bool antithetic_;
  std::vector<double> grid_;
  std::vector<double> states_;
  std::vector<double> brownian_;
  std::vector<double> actions0_;
  std::vector<double> actions1_;
  std::vector<double> weights_;
};

// Weak formulation: controls read the simulated state path.
//   X_{k+1} = X_k + b dt + sigma dW_k,  dW_k ~ N(0, dt I).
// Throws kNumericalBlowup (detail = step) on a non-finite state and
// kDomainViolation when a law leaves its action set.
SimBatch simulate_feedback(const ScenarioSpec& spec, const ControlLaw& law0,
                           const ControlLaw& law1, const SimConfig& cfg);

// Strong formulation: the same scheme, controls read the Brownian path.
SimBatch simulate_strong(const ScenarioSpec& spec, const ControlLaw& law0,
                         const ControlLaw& law1, const SimConfig& cfg);

// Likelihood ratios exp(sum lambda . dW - 1/2 sum |lambda|^2 dt) for a batch
// simulated under girsanov_reduced(spec). Throws kInvalidState when the spec
// declares no lambda or the batch has no stored increments.
SimBatch girsanov_weights(const ScenarioSpec& spec, SimBatch batch);

struct CostEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

// Mean and standard error of i.i.d. samples; antithetic pairs (2i, 2i+1)
// are averaged first.
CostEstimate summarize(std::span<const double> samples,
                       bool antithetic = false);

// Unweighted per-path cost xi + sum_k f(t_k, ...) dt (left endpoint).
std::vector<double> path_costs(const ScenarioSpec& spec,
                               const SimBatch& batch);

// Weighted mean of the path costs with its standard error.
CostEstimate estimate_cost(const ScenarioSpec& spec, const SimBatch& batch);

}  // namespace gamelab

#endif  // GAMELAB_SDE_HPP_
