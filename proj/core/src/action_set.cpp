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

#include "gamelab/action_set.hpp"

#include <algorithm>
#include <cmath>

#include "gamelab/error.hpp"

namespace gamelab {

ActionSet ActionSet::box(const Vec& lower, const Vec& upper, int resolution) {
  if (lower.size() != upper.size() || lower.size() == 0 ||
      lower.size() > kMaxDim) {
    throw Error(ErrorCode::kInvalidArgument, "bad action box dimension");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw Error(ErrorCode::kInvalidArgument, "action box lower > upper");
    }
  }
  if (resolution < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 1");
  }
  ActionSet s;
  s.is_box_ = true;
  s.dim_ = static_cast<int>(lower.size());
  s.resolution_ = resolution;
  s.lower_ = lower;
  s.upper_ = upper;
  return s;
}

ActionSet ActionSet::interval(double lower, double upper, int resolution) {
  return box(vec1(lower), vec1(upper), resolution);
}

ActionSet ActionSet::finite(std::vector<Action> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty finite action set");
  }
  const auto dim = points.front().size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "mixed action dimensions");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate action point");
      }
    }
  }
  ActionSet s;
  s.is_box_ = false;
  s.dim_ = static_cast<int>(dim);
  s.resolution_ = static_cast<int>(points.size());
  s.lower_ = points.front();
  s.upper_ = points.front();
  for (const auto& p : points) {
    s.lower_ = s.lower_.cwiseMin(p);
    s.upper_ = s.upper_.cwiseMax(p);
  }
  s.points_ = std::move(points);
  return s;
}

ActionSet ActionSet::with_resolution(int resolution) const {
  if (!is_box_) return *this;
  return box(lower_, upper_, resolution);
}

std::size_t ActionSet::grid_size() const {
  if (!is_box_) return points_.size();
  std::size_t n = 1;
  for (int i = 0; i < dim_; ++i) {
    n *= lower_[i] == upper_[i]
             ? 1
             : static_cast<std::size_t>(std::max(resolution_, 2));
  }
  return n;
}

std::vector<Action> ActionSet::discretize() const {
  if (!is_box_) return points_;
  // Degenerate coordinates contribute a single point, others at least both
  // endpoints.
  std::vector<int> counts(dim_);
  for (int i = 0; i < dim_; ++i) {
    counts[i] = lower_[i] == upper_[i] ? 1 : std::max(resolution_, 2);
  }
  std::vector<Action> out;
  out.reserve(grid_size());
  std::vector<int> idx(dim_, 0);
  while (true) {
    Action a(dim_);
    for (int i = 0; i < dim_; ++i) {
      if (counts[i] == 1) {
        a[i] = lower_[i];
      } else if (idx[i] == counts[i] - 1) {
        a[i] = upper_[i];
      } else {
        a[i] = lower_[i] + (upper_[i] - lower_[i]) * idx[i] / (counts[i] - 1);
      }
    }
    out.push_back(a);
    int k = dim_ - 1;
    while (k >= 0 && ++idx[k] == counts[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

bool ActionSet::contains(const Action& a, double tol) const {
  if (a.size() != dim_) return false;
  if (is_box_) {
    for (int i = 0; i < dim_; ++i) {
      if (!(a[i] >= lower_[i] - tol && a[i] <= upper_[i] + tol)) return false;
    }
    return true;
  }
  return std::any_of(points_.begin(), points_.end(), [&](const Action& p) {
    return (p - a).cwiseAbs().maxCoeff() <= tol;
  });
}

}  // namespace gamelab
