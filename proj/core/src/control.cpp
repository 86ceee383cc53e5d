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

#include "gamelab/control.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "gamelab/error.hpp"

namespace gamelab {

ControlLaw constant_control(const Action& a) {
  std::ostringstream desc;
  desc << "constant(";
  for (int i = 0; i < a.size(); ++i) desc << (i ? "," : "") << a[i];
  desc << ")";
  return ControlLaw([a](int, const PathView&) { return a; }, desc.str());
}

ControlLaw markov_control(std::function<Action(double t, const Vec& x)> fn,
                          std::string description) {
  return ControlLaw(
      [fn = std::move(fn)](int, const PathView& p) {
        return fn(p.time(), p.current());
      },
      std::move(description));
}

ControlLaw piecewise_constant_control(
    const std::vector<double>& partition,
    const std::vector<std::vector<PathPredicate>>& cells,
    const std::vector<std::vector<Action>>& values, const ActionSet& set) {
  if (partition.size() < 2 || partition.front() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "partition must start at 0 and have a cell");
  }
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    if (!(partition[i + 1] > partition[i])) {
      throw Error(ErrorCode::kInvalidArgument, "partition not increasing");
    }
  }
  const std::size_t m = partition.size() - 1;
  if (cells.size() != m || values.size() != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "one cell list and value list per time interval");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (cells[i].empty() || cells[i].size() != values[i].size()) {
      throw Error(ErrorCode::kInvalidArgument, "cells/values size mismatch");
    }
    for (const auto& v : values[i]) {
      if (!set.contains(v)) {
        throw Error(ErrorCode::kDomainViolation, "value outside action set");
      }
    }
  }
  auto fn = [partition, cells, values](int step, const PathView& p) {
    const double t = p.time(step);
    // Interval i with t_i <= t < t_{i+1}; the last interval is closed.
    auto it = std::upper_bound(partition.begin(), partition.end(), t + 1e-12);
    std::size_t i = static_cast<std::size_t>(it - partition.begin());
    i = i == 0 ? 0 : i - 1;
    i = std::min(i, partition.size() - 2);
    // Cell membership reads the prefix up to t_i only.
    int k = 0;
    while (k < step && p.time(k + 1) <= partition[i] + 1e-12) ++k;
    const PathView prefix = p.prefix(k);
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      if (cells[i][c](prefix)) return values[i][c];
    }
    return values[i].back();
  };
  return ControlLaw(fn, "piecewise-constant");
}

ControlLaw sign_responder(double x0) {
  return constant_control(vec1(-sgn(x0)));
}

}  // namespace gamelab
