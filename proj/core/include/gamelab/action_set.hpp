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

#ifndef GAMELAB_ACTION_SET_HPP_
#define GAMELAB_ACTION_SET_HPP_

#include <vector>

#include "gamelab/types.hpp"

namespace gamelab {

// A player's action set: either an axis-aligned box discretized on a uniform
// grid (endpoints included), or an explicit finite list of points.
class ActionSet {
 public:
  static ActionSet box(const Vec& lower, const Vec& upper,
                       int resolution = 21);
  static ActionSet interval(double lower, double upper, int resolution = 21);
  static ActionSet finite(std::vector<Action> points);

  int dimension() const { return dim_; }
  bool is_box() const { return is_box_; }
  int resolution() const { return resolution_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  ActionSet with_resolution(int resolution) const;

  // Grid points in row-major order (last coordinate fastest). Finite sets
  // return their points unchanged.
  std::vector<Action> discretize() const;
  std::size_t grid_size() const;

  bool contains(const Action& a, double tol = 1e-10) const;

 private:
  ActionSet() = default;

  bool is_box_ = true;
  int dim_ = 0;
  int resolution_ = 21;
  Vec lower_;
  Vec upper_;
  std::vector<Action> points_;
};

}  // namespace gamelab

#endif  // GAMELAB_ACTION_SET_HPP_
