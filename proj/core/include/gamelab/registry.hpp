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

#ifndef GAMELAB_REGISTRY_HPP_
#define GAMELAB_REGISTRY_HPP_

#include <map>
#include <string>
#include <vector>

#include "gamelab/scenario.hpp"

namespace gamelab {

using Overrides = std::map<std::string, double>;

// Registered games:
//   strong-gap         two trackers, noise-adapted controls, no value
//   barlow-control     one-player control problem with the Holder zeta
//   barlow-game        the two-player version, sigma = |a|
//   weak-drift-game    drift-controlled trackers in weak formulation
//   weak-degenerate    the same game with rho = 1 (degenerate noise)
//   barlow-weak        barlow-game posed in weak formulation
//   state-indep-range  clamp volatility with state-independent range
//   bilinear           f = a0 * a1 on {-1, 1}^2, Isaacs fails
//
// Accepted overrides: T, c, rho, n_time, n_space, n_action0, n_action1,
// box. Any other key (dim, drift, vol, ...) is invalid-argument; an unknown
// scenario name is not-found.
ScenarioSpec load_scenario(const std::string& name,
                           const Overrides& overrides = {});

std::vector<std::string> scenario_names();

// Scenario file: {"name": ..., "params": {...}, "grids": {...}}.
ScenarioSpec load_scenario_file(const std::string& path);
ScenarioSpec load_scenario_json(const std::string& text);

}  // namespace gamelab

#endif  // GAMELAB_REGISTRY_HPP_
