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

#ifndef GAMELAB_BSDE_HPP_
#define GAMELAB_BSDE_HPP_

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gamelab/control.hpp"
#include "gamelab/hamiltonian.hpp"
#include "gamelab/regression.hpp"
#include "gamelab/scenario.hpp"
#include "gamelab/sde.hpp"

namespace gamelab {

// Driver F(t, path, y, z) of dY = -F dt + Z . dX with declared Lipschitz
// constants in y and z.
struct Driver {
  std::function<double(double t, const PathView& path, double y,
                       const Vec& z)>
      fn;
  double lipschitz_y = 0.0;
  double lipschitz_z = 0.0;
};

Driver zero_driver();
// F(z) = mu . z.
Driver linear_driver(const Vec& mu);
// F = upper (or lower) Hamiltonian at gamma = 0 over the action grid.
Driver hamiltonian_driver(const ScenarioSpec& spec, const ActionGrid& grid,
                          Side side = Side::kUpper);

// The spec with drift removed and controls frozen; the reference dynamics
// of the forward batch.
ScenarioSpec driftless(const ScenarioSpec& spec);
// Forward batch under driftless(spec) with the first grid actions.
SimBatch simulate_reference(const ScenarioSpec& spec, const SimConfig& cfg);

struct BsdeOptions {
  RegressionBasis basis = RegressionBasis::local_linear(10);
  int picard = 1;
};

struct BsdeSolution {
  CostEstimate y0;
  Vec z0;
  int n_paths = 0;
  int n_steps = 0;
  int dim = 1;
  double dt = 0.0;
  std::vector<double> y;  // n_paths x (n_steps + 1)
  std::vector<double> z;  // n_paths x n_steps x dim
  // Fitted z-maps per step, for feedback evaluation.
  std::vector<std::shared_ptr<const RegressionModel>> z_models;
  std::vector<RegressionDiagnostics> diagnostics;  // per step
  std::shared_ptr<const SimBatch> forward;

  double y_at(int path, int step) const {
    return y[static_cast<std::size_t>(path) * (n_steps + 1) + step];
  }
  Vec z_at(int path, int step) const;
  // Regression prediction of z at time t and state x.
  Vec predict_z(double t, const Vec& x) const;
};

// Backward least-squares scheme on a forward batch:
//   y_n = xi,  cont_k = E[y_{k+1} | X_k],
//   z_k = E[(y_{k+1} - cont_k) dX_k | X_k] (sigma sigma^T dt)^+,
//   y_k = cont_k + dt F(t_k, X, y_k, z_k)   (fixed-point, `picard` sweeps).
// Step 0 uses sample means. Throws kContractionViolation when
// lipschitz_y * dt >= 1 and kRegressionDegenerate (detail = step) on a
// rank-deficient design.
BsdeSolution solve_bsde(const ScenarioSpec& spec, const Driver& driver,
                        std::shared_ptr<const SimBatch> forward,
                        const BsdeOptions& options = {});

struct ZError {
  double rms = 0.0;
  long count = 0;
};

// RMS of z_path - formula(t_k, X_k) over all paths and steps k < n - 2.
ZError z_accuracy(const BsdeSolution& sol,
                  const std::function<Vec(double t, const Vec& x)>& formula);

using SaddleMap = std::function<std::pair<Action, Action>(const Vec& z)>;

// Saddle map z -> argmin/argmax pair of the spec's Hamiltonian at gamma = 0
// (ties to the first grid index).
SaddleMap hamiltonian_saddle_map(const ScenarioSpec& spec,
                                 const ActionGrid& grid);

std::pair<ControlLaw, ControlLaw> extract_saddle_controls(
    std::shared_ptr<const BsdeSolution> sol, const SaddleMap& saddle_map);

struct DeviationResult {
  int player = 0;  // 0 deviates against the candidate's player 1, and v.v.
  std::string description;
  CostEstimate cost;
  double pooled_std_error = 0.0;
  double slack = 0.0;  // amount by which the inequality holds (>= 0 good)
  bool holds = false;
};

struct SaddleCheck {
  CostEstimate candidate;
  std::vector<DeviationResult> deviations;
  double sigmas = 3.0;
  bool passed = false;
};

// Monte Carlo check of
//   J(a0_hat, a1) <= J(a_hat) <= J(a0, a1_hat)
// for every listed deviation, with common random numbers (every run uses
// cfg.seed) and a 3-sigma pooled standard error allowance.
SaddleCheck verify_saddle(const ScenarioSpec& spec,
                          const std::pair<ControlLaw, ControlLaw>& candidate,
                          const std::vector<ControlLaw>& deviations0,
                          const std::vector<ControlLaw>& deviations1,
                          const SimConfig& cfg, double sigmas = 3.0);

// Constant laws at the box corners and centre, a step-alternating law and
// the reflected candidate, all inside `set`.
std::vector<ControlLaw> standard_deviations(const ActionSet& set,
                                            const ControlLaw& candidate);

}  // namespace gamelab

#endif  // GAMELAB_BSDE_HPP_
