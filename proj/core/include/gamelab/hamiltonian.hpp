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

#ifndef GAMELAB_HAMILTONIAN_HPP_
#define GAMELAB_HAMILTONIAN_HPP_

#include <span>
#include <utility>
#include <vector>

#include "gamelab/scenario.hpp"
#include "gamelab/types.hpp"

namespace gamelab {

enum class Side { kUpper, kLower };
enum class Player { kMinimizer = 0, kMaximizer = 1 };

const char* to_string(Side side);

// ---------------------------------------------------------------------------
// Exhaustive minimax over a payoff matrix. Rows belong to player 0 (the
// minimizer), columns to player 1 (the maximizer); the matrix is row-major
// n0 x n1. Ties go to the smallest index.

struct MinimaxResult {
  double upper = 0.0;  // min_i max_j
  double lower = 0.0;  // max_j min_i
  int upper_row = 0;
  int upper_col = 0;  // best reply of player 1 to upper_row
  int lower_row = 0;  // best reply of player 0 to lower_col
  int lower_col = 0;
};

MinimaxResult minimax(std::span<const double> payoff, int n0, int n1);
double upper_value(std::span<const double> payoff, int n0, int n1);
double lower_value(std::span<const double> payoff, int n0, int n1);

struct PureSaddle {
  int row = 0;
  int col = 0;
  double max_violation = 0.0;
  std::vector<std::pair<int, int>> ties;  // all cells with violation <= tol
};

// Cell minimizing the larger of the two saddle-inequality violations
//   max_j M(i, j) - M(i, j)   and   M(i, j) - min_i' M(i', j).
PureSaddle pure_saddle(std::span<const double> payoff, int n0, int n1,
                       double tol);

// ---------------------------------------------------------------------------
// Hamiltonian of a scenario.

struct HamiltonianQuery {
  double t = 0.0;
  PathView path;
  Vec z;
  Mat gamma;
  double y = 0.0;
};

// Builds a Markovian query at (t, x); the PointPath must outlive the query.
HamiltonianQuery make_query(const PointPath& point, double t, const Vec& z,
                            const Mat& gamma, double y = 0.0);

struct ActionGrid {
  std::vector<Action> a0;
  std::vector<Action> a1;

  // Uses the resolutions in spec.grids.
  static ActionGrid from(const ScenarioSpec& spec);
  static ActionGrid from(const ScenarioSpec& spec, int n0, int n1);
};

// 1/2 Tr[sigma sigma^T gamma] + b . z + f(t, path, y, sigma^T z, a).
double h(const ScenarioSpec& spec, const HamiltonianQuery& q,
         const Action& a0, const Action& a1);

std::vector<double> payoff_matrix(const ScenarioSpec& spec,
                                  const HamiltonianQuery& q,
                                  const ActionGrid& grid);

double upper_H(const ScenarioSpec& spec, const HamiltonianQuery& q);
double upper_H(const ScenarioSpec& spec, const HamiltonianQuery& q,
               const ActionGrid& grid);
double lower_H(const ScenarioSpec& spec, const HamiltonianQuery& q);
double lower_H(const ScenarioSpec& spec, const HamiltonianQuery& q,
               const ActionGrid& grid);
double isaacs_gap(const ScenarioSpec& spec, const HamiltonianQuery& q);
double isaacs_gap(const ScenarioSpec& spec, const HamiltonianQuery& q,
                  const ActionGrid& grid);

inline constexpr double kDefaultSaddleTolerance = 1e-9;

struct SaddleReport {
  double value = 0.0;  // h at the reported pair
  Action a0;
  Action a1;
  int index0 = 0;
  int index1 = 0;
  double max_violation = 0.0;
  double gap = 0.0;  // upper_H - lower_H on the grid
  bool is_saddle = false;
  std::vector<std::pair<int, int>> ties;
};

SaddleReport saddle_point(const ScenarioSpec& spec, const HamiltonianQuery& q,
                          const ActionGrid& grid,
                          double tol = kDefaultSaddleTolerance);
SaddleReport saddle_point(const ScenarioSpec& spec, const HamiltonianQuery& q,
                          double tol = kDefaultSaddleTolerance);

struct FixedAction {
  Player player;
  Action action;
};

// Volatility-constrained generator. With player 0 fixed at a0 it returns
//   sup { b.z + f : a1 in A1, sigma sigma^T(a0, a1) = target },
// with player 1 fixed the corresponding inf over a0. Matrix equality is
// Frobenius distance <= 1e-8 (1 + |target|). Throws kConstraintEmpty when no
// grid action meets the constraint.
double constrained_generator(const ScenarioSpec& spec,
                             const HamiltonianQuery& q,
                             const FixedAction& fixed, const Mat& sigma_target,
                             const ActionGrid& grid);

}  // namespace gamelab

#endif  // GAMELAB_HAMILTONIAN_HPP_
