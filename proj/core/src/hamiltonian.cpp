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

#include "gamelab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamelab/error.hpp"

namespace gamelab {

const char* to_string(Side side) {
  return side == Side::kUpper ? "upper" : "lower";
}

namespace {

void check_shape(std::span<const double> payoff, int n0, int n1) {
  if (n0 < 1 || n1 < 1) {
    throw Error(ErrorCode::kInvalidArgument, "empty action grid");
  }
  if (payoff.size() != static_cast<std::size_t>(n0) * n1) {
    throw Error(ErrorCode::kInvalidArgument, "payoff size != n0 * n1");
  }
}

}  // namespace

MinimaxResult minimax(std::span<const double> payoff, int n0, int n1) {
  check_shape(payoff, n0, n1);
  MinimaxResult r;
  r.upper = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n0; ++i) {
    const double* row = payoff.data() + static_cast<std::size_t>(i) * n1;
    int arg = 0;
    for (int j = 1; j < n1; ++j) {
      if (row[j] > row[arg]) arg = j;
    }
    if (row[arg] < r.upper) {
      r.upper = row[arg];
      r.upper_row = i;
      r.upper_col = arg;
    }
  }
  r.lower = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n1; ++j) {
    int arg = 0;
    for (int i = 1; i < n0; ++i) {
      if (payoff[static_cast<std::size_t>(i) * n1 + j] <
          payoff[static_cast<std::size_t>(arg) * n1 + j]) {
        arg = i;
      }
    }
    const double v = payoff[static_cast<std::size_t>(arg) * n1 + j];
    if (v > r.lower) {
      r.lower = v;
      r.lower_row = arg;
      r.lower_col = j;
    }
  }
  return r;
}

double upper_value(std::span<const double> payoff, int n0, int n1) {
  return minimax(payoff, n0, n1).upper;
}

double lower_value(std::span<const double> payoff, int n0, int n1) {
  return minimax(payoff, n0, n1).lower;
}

PureSaddle pure_saddle(std::span<const double> payoff, int n0, int n1,
                       double tol) {
  check_shape(payoff, n0, n1);
  std::vector<double> row_max(n0, -std::numeric_limits<double>::infinity());
  std::vector<double> col_min(n1, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const double v = payoff[static_cast<std::size_t>(i) * n1 + j];
      row_max[i] = std::max(row_max[i], v);
      col_min[j] = std::min(col_min[j], v);
    }
  }
  PureSaddle s;
  s.max_violation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const double v = payoff[static_cast<std::size_t>(i) * n1 + j];
      const double viol = std::max(row_max[i] - v, v - col_min[j]);
      if (viol < s.max_violation) {
        s.max_violation = viol;
        s.row = i;
        s.col = j;
      }
      if (viol <= tol) s.ties.emplace_back(i, j);
    }
  }
  return s;
}

HamiltonianQuery make_query(const PointPath& point, double t, const Vec& z,
                            const Mat& gamma, double y) {
  HamiltonianQuery q;
  q.t = t;
  q.path = point.view();
  q.z = z;
  q.gamma = gamma;
  q.y = y;
  return q;
}

ActionGrid ActionGrid::from(const ScenarioSpec& spec) {
  return {spec.action0.discretize(), spec.action1.discretize()};
}

ActionGrid ActionGrid::from(const ScenarioSpec& spec, int n0, int n1) {
  return {spec.action0.with_resolution(n0).discretize(),
          spec.action1.with_resolution(n1).discretize()};
}

double h(const ScenarioSpec& spec, const HamiltonianQuery& q,
         const Action& a0, const Action& a1) {
  const Vec b = spec.drift(q.t, q.path, a0, a1);
  const Mat s = spec.vol(q.t, q.path, a0, a1);
  const double diffusion = 0.5 * (s * s.transpose() * q.gamma).trace();
  const Vec sz = s.transpose() * q.z;
  return diffusion + b.dot(q.z) +
         spec.running_cost(q.t, q.path, q.y, sz, a0, a1);
}

std::vector<double> payoff_matrix(const ScenarioSpec& spec,
                                  const HamiltonianQuery& q,
                                  const ActionGrid& grid) {
  if (grid.a0.empty() || grid.a1.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty action grid");
  }
  std::vector<double> m;
  m.reserve(grid.a0.size() * grid.a1.size());
  for (const auto& a0 : grid.a0) {
    for (const auto& a1 : grid.a1) m.push_back(h(spec, q, a0, a1));
  }
  return m;
}

namespace {

MinimaxResult grid_minimax(const ScenarioSpec& spec, const HamiltonianQuery& q,
                           const ActionGrid& grid) {
  const auto m = payoff_matrix(spec, q, grid);
  return minimax(m, static_cast<int>(grid.a0.size()),
                 static_cast<int>(grid.a1.size()));
}

}  // namespace

double upper_H(const ScenarioSpec& spec, const HamiltonianQuery& q,
               const ActionGrid& grid) {
  return grid_minimax(spec, q, grid).upper;
}

double upper_H(const ScenarioSpec& spec, const HamiltonianQuery& q) {
  return upper_H(spec, q, ActionGrid::from(spec));
}

double lower_H(const ScenarioSpec& spec, const HamiltonianQuery& q,
               const ActionGrid& grid) {
  return grid_minimax(spec, q, grid).lower;
}

double lower_H(const ScenarioSpec& spec, const HamiltonianQuery& q) {
  return lower_H(spec, q, ActionGrid::from(spec));
}

double isaacs_gap(const ScenarioSpec& spec, const HamiltonianQuery& q,
                  const ActionGrid& grid) {
  const auto r = grid_minimax(spec, q, grid);
  return r.upper - r.lower;
}

double isaacs_gap(const ScenarioSpec& spec, const HamiltonianQuery& q) {
  return isaacs_gap(spec, q, ActionGrid::from(spec));
}

SaddleReport saddle_point(const ScenarioSpec& spec, const HamiltonianQuery& q,
                          const ActionGrid& grid, double tol) {
  const auto m = payoff_matrix(spec, q, grid);
  const int n0 = static_cast<int>(grid.a0.size());
  const int n1 = static_cast<int>(grid.a1.size());
  const auto mm = minimax(m, n0, n1);
  auto ps = pure_saddle(m, n0, n1, tol);
  SaddleReport r;
  r.index0 = ps.row;
  r.index1 = ps.col;
  r.a0 = grid.a0[ps.row];
  r.a1 = grid.a1[ps.col];
  r.value = m[static_cast<std::size_t>(ps.row) * n1 + ps.col];
  r.max_violation = ps.max_violation;
  r.gap = mm.upper - mm.lower;
  r.is_saddle = ps.max_violation <= tol;
  r.ties = std::move(ps.ties);
  return r;
}

SaddleReport saddle_point(const ScenarioSpec& spec, const HamiltonianQuery& q,
                          double tol) {
  return saddle_point(spec, q, ActionGrid::from(spec), tol);
}

double constrained_generator(const ScenarioSpec& spec,
                             const HamiltonianQuery& q,
                             const FixedAction& fixed, const Mat& sigma_target,
                             const ActionGrid& grid) {
  const double tol = 1e-8 * (1.0 + sigma_target.norm());
  const bool fix0 = fixed.player == Player::kMinimizer;
  const auto& free_grid = fix0 ? grid.a1 : grid.a0;
  bool feasible = false;
  double best = fix0 ? -std::numeric_limits<double>::infinity()
                     : std::numeric_limits<double>::infinity();
  for (const auto& a : free_grid) {
    const Action& a0 = fix0 ? fixed.action : a;
    const Action& a1 = fix0 ? a : fixed.action;
    const Mat s = spec.vol(q.t, q.path, a0, a1);
    const Mat sst = s * s.transpose();
    if (sst.rows() != sigma_target.rows() ||
        sst.cols() != sigma_target.cols() ||
        (sst - sigma_target).norm() > tol) {
      continue;
    }
    feasible = true;
    const Vec sz = s.transpose() * q.z;
    const double F = spec.drift(q.t, q.path, a0, a1).dot(q.z) +
                     spec.running_cost(q.t, q.path, q.y, sz, a0, a1);
    best = fix0 ? std::max(best, F) : std::min(best, F);
  }
  if (!feasible) {
    throw Error(ErrorCode::kConstraintEmpty,
                "no grid action matches the target volatility");
  }
  return best;
}

}  // namespace gamelab
