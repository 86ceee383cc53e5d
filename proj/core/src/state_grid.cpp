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

#include "gamelab/state_grid.hpp"

#include <algorithm>
#include <cmath>

#include "gamelab/error.hpp"

namespace gamelab {

StateGrid::StateGrid(const Vec& lower, const Vec& upper, int n_per_dim)
    : dim_(static_cast<int>(lower.size())),
      n_(n_per_dim),
      lower_(lower),
      upper_(upper) {
  if (dim_ < 1 || dim_ > 2 || upper.size() != lower.size()) {
    throw Error(ErrorCode::kInvalidArgument, "state grids support d <= 2");
  }
  if (n_per_dim < 3) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 3 nodes per axis");
  }
  dx_ = (upper[0] - lower[0]) / (n_ - 1);
  if (!(dx_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "empty state box");
  }
  for (int i = 1; i < dim_; ++i) {
    const double h = (upper[i] - lower[i]) / (n_ - 1);
    if (std::abs(h - dx_) > 1e-12 * dx_) {
      throw Error(ErrorCode::kInvalidArgument, "state box must be cubic");
    }
  }
  size_ = dim_ == 1 ? n_ : n_ * n_;
}

StateGrid StateGrid::centered(int dim, double half_width, int n_per_dim) {
  return StateGrid(Vec::Constant(dim, -half_width),
                   Vec::Constant(dim, half_width), n_per_dim);
}

std::array<int, 2> StateGrid::multi_index(int index) const {
  if (dim_ == 1) return {index, 0};
  return {index / n_, index % n_};
}

int StateGrid::index(int i0, int i1) const {
  return dim_ == 1 ? i0 : i0 * n_ + i1;
}

Vec StateGrid::node(int index) const {
  const auto mi = multi_index(index);
  Vec x(dim_);
  for (int i = 0; i < dim_; ++i) {
    x[i] = mi[i] == n_ - 1 ? upper_[i] : lower_[i] + mi[i] * dx_;
  }
  return x;
}

int StateGrid::shifted_clamped(int index, int off0, int off1) const {
  const auto mi = multi_index(index);
  const int i0 = std::clamp(mi[0] + off0, 0, n_ - 1);
  if (dim_ == 1) return i0;
  const int i1 = std::clamp(mi[1] + off1, 0, n_ - 1);
  return i0 * n_ + i1;
}

int StateGrid::nearest(const Vec& x) const {
  int idx[2] = {0, 0};
  for (int i = 0; i < dim_; ++i) {
    const double r = std::round((x[i] - lower_[i]) / dx_);
    idx[i] = static_cast<int>(std::clamp(r, 0.0, static_cast<double>(n_ - 1)));
  }
  return index(idx[0], idx[1]);
}

bool StateGrid::on_boundary(int index) const {
  const auto mi = multi_index(index);
  for (int i = 0; i < dim_; ++i) {
    if (mi[i] == 0 || mi[i] == n_ - 1) return true;
  }
  return false;
}

bool StateGrid::in_trimmed_interior(int index, double fraction) const {
  const Vec x = node(index);
  for (int i = 0; i < dim_; ++i) {
    const double margin = fraction * (upper_[i] - lower_[i]);
    if (x[i] < lower_[i] + margin - 1e-12 ||
        x[i] > upper_[i] - margin + 1e-12) {
      return false;
    }
  }
  return !on_boundary(index);
}

CoefficientTable::CoefficientTable(const ScenarioSpec& spec,
                                   const StateGrid& grid,
                                   const ActionGrid& actions, double t)
    : dim_(grid.dim()) {
  if (!spec.markovian) {
    throw Error(ErrorCode::kInvalidArgument,
                "coefficient tables need a Markovian scenario");
  }
  if (spec.dim != grid.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "grid/scenario dimension");
  }
  const int n0 = static_cast<int>(actions.a0.size());
  const int n1 = static_cast<int>(actions.a1.size());
  if (n0 == 0 || n1 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty action grid");
  }
  pairs_ = n0 * n1;
  stride_ = dim_ == 1 ? 3 : 6;
  data_.resize(static_cast<std::size_t>(grid.size()) * pairs_ * stride_);
  const Vec zero = Vec::Zero(dim_);
  double* out = data_.data();
  for (int node = 0; node < grid.size(); ++node) {
    const PointPath point(t, grid.node(node));
    const PathView view = point.view();
    for (int i0 = 0; i0 < n0; ++i0) {
      for (int i1 = 0; i1 < n1; ++i1) {
        const Action& a0 = actions.a0[i0];
        const Action& a1 = actions.a1[i1];
        const Vec b = spec.drift(t, view, a0, a1);
        const Mat s = spec.vol(t, view, a0, a1);
        const Mat a = s * s.transpose();
        const double f = spec.running_cost(t, view, 0.0, zero, a0, a1);
        if (dim_ == 1) {
          out[0] = b[0];
          out[1] = a(0, 0);
          out[2] = f;
          max_b1_ = std::max(max_b1_, std::abs(b[0]));
          max_trace_ = std::max(max_trace_, a(0, 0));
          max_b_ = std::max(max_b_, std::abs(b[0]));
          max_a_ = std::max(max_a_, a(0, 0));
        } else {
          out[0] = b[0];
          out[1] = b[1];
          out[2] = a(0, 0);
          out[3] = a(1, 1);
          out[4] = 0.5 * (a(0, 1) + a(1, 0));
          out[5] = f;
          max_b1_ = std::max(max_b1_, std::abs(b[0]) + std::abs(b[1]));
          max_trace_ = std::max(max_trace_, a(0, 0) + a(1, 1));
          max_b_ = std::max({max_b_, std::abs(b[0]), std::abs(b[1])});
          max_a_ = std::max({max_a_, a(0, 0), a(1, 1)});
        }
        out += stride_;
      }
    }
  }
}

}  // namespace gamelab
