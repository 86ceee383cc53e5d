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

#ifndef GAMELAB_SCENARIO_HPP_
#define GAMELAB_SCENARIO_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "gamelab/action_set.hpp"
#include "gamelab/control.hpp"
#include "gamelab/path.hpp"
#include "gamelab/types.hpp"

namespace gamelab {

using DriftFn = std::function<Vec(double t, const PathView& path,
                                  const Action& a0, const Action& a1)>;
using VolFn = std::function<Mat(double t, const PathView& path,
                                const Action& a0, const Action& a1)>;
// f(t, path, y, z, a0, a1); y and z are ignored by linear-cost games.
using RunningCostFn =
    std::function<double(double t, const PathView& path, double y,
                         const Vec& z, const Action& a0, const Action& a1)>;
using TerminalFn = std::function<double(const PathView& full_path)>;
using ClosedFormFn = std::function<double(double t, const Vec& x)>;

struct CoefficientBounds {
  double drift = 0.0;         // sup |b|
  double vol = 0.0;           // sup max |sigma_ij|
  double running_cost = 0.0;  // sup |f| on the audit region
};

struct GridConfig {
  int n_time = 64;
  int n_space = 61;
  int n_action0 = 21;
  int n_action1 = 21;
};

// Full description of a two-player zero-sum game. Player 0 minimizes the
// cost, player 1 maximizes it.
struct ScenarioSpec {
  std::string name;
  std::string description;
  int dim = 1;
  double horizon = 1.0;

  DriftFn drift;
  VolFn vol;  // symmetric d x d
  RunningCostFn running_cost;
  TerminalFn terminal_cost;
  DriftFn girsanov;  // optional lambda; empty when not declared

  ActionSet action0 = ActionSet::interval(0.0, 0.0, 1);
  ActionSet action1 = ActionSet::interval(0.0, 0.0, 1);
  CoefficientBounds bounds;

  // Coefficients read only the current state (lattice / PDE eligible).
  bool markovian = true;
  bool time_homogeneous = true;

  std::map<std::string, double> params;
  GridConfig grids;
  // Half-width of the default state box used by lattice and PDE solvers.
  double box_half_width = 3.0;

  // Known value function v(t, x), when the game has one in closed form.
  ClosedFormFn closed_form;
  // Known feedback saddle law, when available.
  std::optional<std::pair<ControlLaw, ControlLaw>> saddle_laws;

  double param(const std::string& key) const;

  Vec eval_drift(double t, const PathView& p, const Action& a0,
                 const Action& a1) const {
    return drift(t, p, a0, a1);
  }
  Mat eval_vol(double t, const PathView& p, const Action& a0,
               const Action& a1) const {
    return vol(t, p, a0, a1);
  }
  double eval_cost(double t, const PathView& p, const Action& a0,
                   const Action& a1) const;
};

// Results of sampling a scenario's coefficients on random inputs.
struct ScenarioAudit {
  double max_asymmetry = 0.0;      // max |sigma - sigma^T|
  double max_bound_excess = 0.0;   // max(0, |coef| - declared bound)
  double max_anticipation = 0.0;   // max change when the future is perturbed
  int samples = 0;
  bool ok(double tol = 1e-10) const {
    return max_asymmetry <= 1e-12 && max_bound_excess <= tol &&
           max_anticipation <= tol;
  }
};

// Samples `n` random paths (Brownian-like, starting at 0) and actions.
// The running cost is audited against its bound only for |x| <= audit_box.
ScenarioAudit audit_scenario(const ScenarioSpec& spec, int n,
                             std::uint64_t seed, double audit_box = 3.0);

// Checks that a control law gives identical actions on path pairs agreeing
// up to the evaluation step. Returns the number of disagreements.
int count_anticipations(const ScenarioSpec& spec, const ControlLaw& law,
                        int n, std::uint64_t seed);

// Drift replaced by b - sigma * lambda, lambda kept for reweighting.
// Throws kInvalidState when the spec has no lambda.
ScenarioSpec girsanov_reduced(const ScenarioSpec& spec);

ScenarioSpec with_girsanov(const ScenarioSpec& spec, DriftFn lambda);

}  // namespace gamelab

#endif  // GAMELAB_SCENARIO_HPP_
