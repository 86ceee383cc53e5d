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

#ifndef GAMELAB_PATH_HPP_
#define GAMELAB_PATH_HPP_

#include <vector>

#include "gamelab/types.hpp"

namespace gamelab {

// Non-owning view of a discrete path prefix: rows 0..step of a row-major
// (n+1) x dim state array together with its time grid. Coefficients and
// control laws only ever see a PathView, so reading past `step` is a
// programming error and throws.
class PathView {
 public:
  PathView() = default;
  PathView(const double* grid, const double* states, int dim, int step)
      : grid_(grid), states_(states), dim_(dim), step_(step) {}

  int dim() const { return dim_; }
  int step() const { return step_; }
  double time() const { return grid_[step_]; }
  double time(int k) const;

  Vec state(int k) const;
  Vec current() const { return state(step_); }
  double coord(int k, int i) const;

  // The same path truncated at an earlier step.
  PathView prefix(int k) const;

 private:
  const double* grid_ = nullptr;
  const double* states_ = nullptr;
  int dim_ = 0;
  int step_ = 0;
};

// Single-point path (t, x) used for Markovian evaluations on grids.
class PointPath {
 public:
  PointPath(double t, const Vec& x);
  PathView view() const { return PathView(&t_, x_.data(), dim_, 0); }

 private:
  double t_;
  int dim_;
  std::vector<double> x_;
};

// Owning discrete trajectory on the canonical space: states[0] = 0.
struct SamplePath {
  std::vector<double> grid;      // t_0 = 0 < ... < t_n = T
  std::vector<double> states;    // (n+1) x dim, row-major
  std::vector<double> brownian;  // optional, (n+1) x dim
  int dim = 1;
  double weight = 1.0;

  int n_steps() const { return static_cast<int>(grid.size()) - 1; }
  PathView view(int step) const {
    return PathView(grid.data(), states.data(), dim, step);
  }
  PathView full() const { return view(n_steps()); }

  // Throws kInvalidState when an invariant is broken.
  void validate() const;
};

std::vector<double> uniform_grid(double horizon, int n_steps);

}  // namespace gamelab

#endif  // GAMELAB_PATH_HPP_
