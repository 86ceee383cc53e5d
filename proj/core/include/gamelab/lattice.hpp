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

#ifndef GAMELAB_LATTICE_HPP_
#define GAMELAB_LATTICE_HPP_

#include <memory>
#include <vector>

#include "gamelab/hamiltonian.hpp"
#include "gamelab/scenario.hpp"
#include "gamelab/state_grid.hpp"

namespace gamelab {

struct LatticeOptions {
  // Largest jump, in cells, the moment-matching chain may use.
  int max_jump = 8;
  // Half-width of the state box; <= 0 means spec.box_half_width.
  double half_width = 0.0;
  int n_action0 = 0;  // 0 means spec.grids
  int n_action1 = 0;
};

struct Transition {
  int target;
  double prob;
};

// Markov chain approximation of the controlled diffusion on a uniform state
// grid. Every (node, action pair) moves along the coordinate axes and, when
// sigma has a cross term, along the diagonal (1, sign a12); the jump length
// is the smallest multiple of dx that keeps all probabilities in [0, 1].
// Drift is matched by central differences where the diffusion allows it and
// by upwinding otherwise, so the mean increment is b dt exactly. Targets
// outside the box are clamped to the boundary.
class Lattice {
 public:
  int n_steps() const { return n_steps_; }
  double dt() const { return dt_; }
  double horizon() const { return horizon_; }
  const StateGrid& states() const { return grid_; }
  const ActionGrid& actions() const { return actions_; }
  int n0() const { return static_cast<int>(actions_.a0.size()); }
  int n1() const { return static_cast<int>(actions_.a1.size()); }
  double time(int step) const { return step * dt_; }

  const CoefficientTable& coefficients(int step) const;

  // Appends the transition vector of (node, i0, i1) at `step` to `out`.
  void transitions(int step, int node, int i0, int i1,
                   std::vector<Transition>& out) const;
  double running_cost(int step, int node, int i0, int i1) const;

 private:
  friend Lattice build_lattice(const ScenarioSpec&, int, int,
                               const LatticeOptions&);
  Lattice(StateGrid grid, ActionGrid actions, int n_steps, double horizon);

  StateGrid grid_;
  ActionGrid actions_;
  int n_steps_;
  double horizon_;
  double dt_;
  int max_jump_ = 8;
  // One table for time-homogeneous games, otherwise one per step.
  std::vector<std::shared_ptr<const CoefficientTable>> tables_;
};

// Throws kInvalidArgument for non-Markovian specs or d > 2 and
// kStabilityViolation (detail = required n_t) when no admissible jump
// exists.
Lattice build_lattice(const ScenarioSpec& spec, int n_t, int n_x,
                      const LatticeOptions& options = {});

struct ValueTable {
  std::vector<std::vector<double>> upper;  // [step][node]
  std::vector<std::vector<double>> lower;
  // Equilibrium action indices per (step, node) for steps < n.
  std::vector<std::vector<int>> upper_a0, upper_a1, lower_a0, lower_a1;
  std::vector<Vec> nodes;
  double dt = 0.0;
  int n_per_dim = 0;
  int dim = 0;
};

// One backward step V(t_i) from V(t_{i+1}) for one side.
std::vector<double> dpp_step(const Lattice& lattice, const ScenarioSpec& spec,
                             const std::vector<double>& next, int step,
                             Side side, std::vector<int>* arg0 = nullptr,
                             std::vector<int>* arg1 = nullptr);

ValueTable backward_upper(const Lattice& lattice, const ScenarioSpec& spec);
ValueTable backward_lower(const Lattice& lattice, const ScenarioSpec& spec);
// Both sides in one pass.
ValueTable backward(const Lattice& lattice, const ScenarioSpec& spec);

// max over nodes of upper - lower at t = 0.
double value_gap(const ValueTable& table);
// Interpolated value at a state at t = 0 (nearest node).
double value_at(const ValueTable& table, const Lattice& lattice,
                const Vec& x, Side side);

struct ResidualField {
  std::vector<std::vector<double>> residual;  // [step][node], NaN off-region
  double max_abs = 0.0;
};

// Discrete residual -dV/dt - H(x, DV, D2V) of the upper (or lower) table,
// with forward time differences and central space differences, on the box
// trimmed by `trim` of its width per side.
ResidualField viscosity_residual(const ValueTable& table,
                                 const Lattice& lattice,
                                 const ScenarioSpec& spec, Side side,
                                 double trim = 0.1);

}  // namespace gamelab

#endif  // GAMELAB_LATTICE_HPP_
