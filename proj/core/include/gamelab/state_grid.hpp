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

#ifndef GAMELAB_STATE_GRID_HPP_
#define GAMELAB_STATE_GRID_HPP_

#include <array>
#include <vector>

#include "gamelab/hamiltonian.hpp"
#include "gamelab/scenario.hpp"

namespace gamelab {

// Uniform tensor grid on a box in R^d (d <= 2), nodes numbered with the last
// coordinate fastest.
class StateGrid {
 public:
  StateGrid(const Vec& lower, const Vec& upper, int n_per_dim);
  static StateGrid centered(int dim, double half_width, int n_per_dim);

  int dim() const { return dim_; }
  int n_per_dim() const { return n_; }
  int size() const { return size_; }
  double spacing() const { return dx_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  Vec node(int index) const;
  std::array<int, 2> multi_index(int index) const;
  int index(int i0, int i1 = 0) const;
  // Node obtained by moving `offset` cells along each axis, clamped to the
  // box.
  int shifted_clamped(int index, int off0, int off1 = 0) const;
  int nearest(const Vec& x) const;
  bool on_boundary(int index) const;
  // Inside the box shrunk by `fraction` of its width on each side.
  bool in_trimmed_interior(int index, double fraction) const;

 private:
  int dim_;
  int n_;
  int size_;
  double dx_;
  Vec lower_;
  Vec upper_;
};

// Markovian coefficients b, a = sigma sigma^T and f tabulated on every
// (node, action pair) of a grid at a fixed time.
class CoefficientTable {
 public:
  CoefficientTable(const ScenarioSpec& spec, const StateGrid& grid,
                   const ActionGrid& actions, double t);

  int pairs() const { return pairs_; }
  // Packed record: b[0..d), a11, a22, a12 (d = 2) or a11 (d = 1), f.
  const double* record(int node, int pair) const {
    return data_.data() + (static_cast<std::size_t>(node) * pairs_ + pair) *
                              stride_;
  }
  int stride() const { return stride_; }

  double max_drift_abs_sum() const { return max_b1_; }
  double max_trace() const { return max_trace_; }
  double max_drift() const { return max_b_; }      // max_i |b_i|
  double max_diffusion() const { return max_a_; }  // max_i a_ii

 private:
  int dim_;
  int pairs_;
  int stride_;
  std::vector<double> data_;
  double max_b1_ = 0.0;
  double max_trace_ = 0.0;
  double max_b_ = 0.0;
  double max_a_ = 0.0;
};

}  // namespace gamelab

#endif  // GAMELAB_STATE_GRID_HPP_
