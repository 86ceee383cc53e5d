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

#ifndef GAMELAB_PDE_HPP_
#define GAMELAB_PDE_HPP_

#include <functional>
#include <vector>

#include "gamelab/control.hpp"
#include "gamelab/hamiltonian.hpp"
#include "gamelab/scenario.hpp"
#include "gamelab/state_grid.hpp"

namespace gamelab {

// Explicit monotone finite differences for the Isaacs equation
//   -v_t - H(x, Dv, D2v) = 0,  v(T) = xi.
// First derivatives are central where the axis diffusion weight keeps the
// stencil monotone and upwinded otherwise; the diffusion uses the
// diagonal-direction splitting
//   a11 v11 + a22 v22 + 2 a12 v12
//     = (a11-|a12|) v11 + (a22-|a12|) v22 + |a12| D_s v,
// with D_s the second difference along (1, sign a12); this is monotone
// whenever |a12| <= min(a11, a22) and exact on quadratics.
struct FdGrid {
  Vec lower;
  Vec upper;
  int n_x = 101;
  int n_t = 100;
  double horizon = 1.0;
  // Time slices kept in the solution, evenly spaced, t = 0 and T included.
  int n_saved = 33;

  StateGrid states() const { return StateGrid(lower, upper, n_x); }
  double dt() const { return horizon / n_t; }

  // Smallest n_t with dt * max(max_i a_ii / dx^2 + max_i |b_i| / dx) <= 1/2.
  static FdGrid with_cfl(const ScenarioSpec& spec, const Vec& lower,
                         const Vec& upper, int n_x,
                         const ActionGrid& actions);
  static FdGrid centered(const ScenarioSpec& spec, double half_width,
                         int n_x, const ActionGrid& actions);
};

inline constexpr double kCflBound = 0.5;

// CFL number dt * max(max_i a_ii / dx^2 + max_i |b_i| / dx) of a grid.
double cfl_number(const ScenarioSpec& spec, const FdGrid& grid,
                  const ActionGrid& actions);

struct PdeSolution {
  FdGrid grid;
  Side which = Side::kUpper;
  std::vector<int> steps;                   // time index of each slice
  std::vector<std::vector<double>> values;  // [slice][node]
  double cfl = 0.0;

  int n_slices() const { return static_cast<int>(steps.size()); }
  double time(int slice) const { return steps[slice] * grid.dt(); }
  double value(int slice, const Vec& x) const;  // nearest node
  double value_at_origin() const;               // t = 0
};

// Throws kStabilityViolation (detail = suggested n_t) when the CFL bound
// fails and kInvalidArgument for non-Markovian specs or d > 2.
//
// Boundary nodes keep the terminal profile shifted by the offset of their
// inward neighbour, v_b(t) = xi(x_b) + v(t, x_in) - xi(x_in).
PdeSolution solve_isaacs(const ScenarioSpec& spec, const FdGrid& grid,
                         Side which, const ActionGrid& actions);
PdeSolution solve_isaacs(const ScenarioSpec& spec, const FdGrid& grid,
                         Side which);

// The explicit update of one node given the next time slice; exposed for
// the monotonicity property tests.
double fd_update(const ScenarioSpec& spec, const StateGrid& states,
                 const CoefficientTable& coefficients,
                 const std::vector<double>& next, int node, double dt,
                 Side which, int n0, int n1);

struct ErrorSummary {
  double max_abs = 0.0;
  double l2 = 0.0;  // root mean square over the region
  int count = 0;
};

// Error against v(t, x) over all saved slices on the box trimmed by `trim`
// of its width per side.
ErrorSummary closed_form_error(const PdeSolution& sol,
                               const ClosedFormFn& formula,
                               double trim = 0.1);
// Error on a single saved slice.
ErrorSummary closed_form_error_at(const PdeSolution& sol,
                                  const ClosedFormFn& formula, int slice,
                                  double trim = 0.1);

struct SaddleField {
  FdGrid grid;
  std::vector<double> times;               // slice times
  std::vector<std::vector<SaddleReport>> reports;  // [slice][node]
  std::vector<Action> a0_grid;
  std::vector<Action> a1_grid;

  // Feedback laws by nearest (time slice, node) lookup.
  ControlLaw law0() const;
  ControlLaw law1() const;
  const SaddleReport& at(double t, const Vec& x) const;
};

// Saddle points of the Hamiltonian at (Dv, D2v) from central differences
// of the upper solution, on `n_slices` evenly spaced time slices. Throws
// kNoSaddleField when |upper - lower| exceeds `gap_tol` somewhere in the
// trimmed interior.
SaddleField saddle_field(const PdeSolution& upper, const PdeSolution& lower,
                         const ScenarioSpec& spec, const ActionGrid& actions,
                         double gap_tol, int n_slices = 8,
                         double saddle_tol = kDefaultSaddleTolerance);

}  // namespace gamelab

#endif  // GAMELAB_PDE_HPP_
