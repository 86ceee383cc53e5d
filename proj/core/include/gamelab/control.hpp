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

#ifndef GAMELAB_CONTROL_HPP_
#define GAMELAB_CONTROL_HPP_

#include <functional>
#include <string>
#include <vector>

#include "gamelab/action_set.hpp"
#include "gamelab/path.hpp"
#include "gamelab/types.hpp"

namespace gamelab {

// Non-anticipative feedback map (step, path prefix) -> action. The path is
// the state path in weak formulation and the Brownian path in strong
// formulation; the law itself does not know which.
class ControlLaw {
 public:
  using Fn = std::function<Action(int step, const PathView& path)>;

  ControlLaw(Fn fn, std::string description)
      : fn_(std::move(fn)), description_(std::move(description)) {}

  Action operator()(int step, const PathView& path) const {
    return fn_(step, path);
  }
  Action evaluate(int step, const PathView& path) const {
    return fn_(step, path);
  }
  const std::string& description() const { return description_; }

 private:
  Fn fn_;
  std::string description_;
};

using PathPredicate = std::function<bool(const PathView& prefix)>;

ControlLaw constant_control(const Action& a);

// Feedback on the current state only: (t, x) -> action.
ControlLaw markov_control(std::function<Action(double t, const Vec& x)> fn,
                          std::string description);

// Simple process: constant on each [t_i, t_{i+1}) x cell, where cell
// membership is decided on the path prefix up to t_i. `cells[i]` holds the
// predicates of time cell i and `values[i][j]` the action on its j-th cell;
// the first predicate that holds wins.
ControlLaw piecewise_constant_control(
    const std::vector<double>& partition,
    const std::vector<std::vector<PathPredicate>>& cells,
    const std::vector<std::vector<Action>>& values, const ActionSet& set);

// The constant responder -sgn(x0) used against an opponent whose expected
// cumulative control is x0.
ControlLaw sign_responder(double x0);

}  // namespace gamelab

#endif  // GAMELAB_CONTROL_HPP_
