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

#include "gamelab/path.hpp"

#include <cmath>
#include <string>

#include "gamelab/error.hpp"

namespace gamelab {

double PathView::time(int k) const {
  if (k < 0 || k > step_) {
    throw Error(ErrorCode::kInvalidState,
                "time index " + std::to_string(k) + " beyond prefix " +
                    std::to_string(step_));
  }
  return grid_[k];
}

Vec PathView::state(int k) const {
  if (k < 0 || k > step_) {
    throw Error(ErrorCode::kInvalidState,
                "state index " + std::to_string(k) + " beyond prefix " +
                    std::to_string(step_));
  }
  Vec x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = states_[k * dim_ + i];
  return x;
}

double PathView::coord(int k, int i) const {
  if (k < 0 || k > step_ || i < 0 || i >= dim_) {
    throw Error(ErrorCode::kInvalidState, "coordinate outside prefix");
  }
  return states_[k * dim_ + i];
}

PathView PathView::prefix(int k) const {
  if (k < 0 || k > step_) {
    throw Error(ErrorCode::kInvalidState, "prefix longer than path");
  }
  return PathView(grid_, states_, dim_, k);
}

PointPath::PointPath(double t, const Vec& x)
    : t_(t), dim_(static_cast<int>(x.size())), x_(x.data(), x.data() + x.size()) {}

void SamplePath::validate() const {
  const int n = n_steps();
  if (n < 1) throw Error(ErrorCode::kInvalidState, "empty time grid");
  if (grid.front() != 0.0) {
    throw Error(ErrorCode::kInvalidState, "grid must start at 0");
  }
  for (int k = 0; k < n; ++k) {
    if (!(grid[k + 1] > grid[k])) {
      throw Error(ErrorCode::kInvalidState, "grid not strictly increasing");
    }
  }
  if (states.size() != static_cast<std::size_t>((n + 1) * dim)) {
    throw Error(ErrorCode::kInvalidState, "states/grid length mismatch");
  }
  if (!brownian.empty() && brownian.size() != states.size()) {
    throw Error(ErrorCode::kInvalidState, "brownian/grid length mismatch");
  }
  for (int i = 0; i < dim; ++i) {
    if (states[i] != 0.0) {
      throw Error(ErrorCode::kInvalidState, "path must start at 0");
    }
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::kInvalidState, "weight must be positive");
  }
}

std::vector<double> uniform_grid(double horizon, int n_steps) {
  if (n_steps < 1 || !(horizon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need n_steps >= 1, T > 0");
  }
  std::vector<double> grid(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) grid[k] = horizon * k / n_steps;
  grid[n_steps] = horizon;
  return grid;
}

}  // namespace gamelab
