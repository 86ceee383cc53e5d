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

#include "gamelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gamelab/error.hpp"

namespace gamelab {

double ScenarioSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorCode::kNotFound, "scenario " + name + " has no " + key);
  }
  return it->second;
}

double ScenarioSpec::eval_cost(double t, const PathView& p, const Action& a0,
                               const Action& a1) const {
  return running_cost(t, p, 0.0, Vec::Zero(dim), a0, a1);
}

namespace {

constexpr int kAuditSteps = 16;

Action random_action(const ActionSet& set, std::mt19937_64& rng) {
  if (!set.is_box()) {
    auto pts = set.discretize();
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    return pts[pick(rng)];
  }
  Action a(set.dimension());
  for (int i = 0; i < set.dimension(); ++i) {
    std::uniform_real_distribution<double> u(set.lower()[i], set.upper()[i]);
    a[i] = u(rng);
  }
  return a;
}

// Random walk from 0 on [0, T] clamped to [-box, box]^d.
std::vector<double> random_path(int dim, double box, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  std::vector<double> s((kAuditSteps + 1) * dim, 0.0);
  const double scale = box / std::sqrt(static_cast<double>(kAuditSteps));
  for (int k = 1; k <= kAuditSteps; ++k) {
    for (int i = 0; i < dim; ++i) {
      s[k * dim + i] = std::clamp(s[(k - 1) * dim + i] + scale * n01(rng),
                                  -box, box);
    }
  }
  return s;
}

void perturb_after(std::vector<double>& s, int dim, int step,
                   std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  for (int k = step + 1; k <= kAuditSteps; ++k) {
    for (int i = 0; i < dim; ++i) s[k * dim + i] += 1.0 + n01(rng);
  }
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0; }

}  // namespace

ScenarioAudit audit_scenario(const ScenarioSpec& spec, int n,
                             std::uint64_t seed, double audit_box) {
  ScenarioAudit audit;
  std::mt19937_64 rng(seed);
  const auto grid = uniform_grid(spec.horizon, kAuditSteps);
  std::uniform_int_distribution<int> pick_step(0, kAuditSteps - 1);
  for (int s = 0; s < n; ++s) {
    auto states = random_path(spec.dim, audit_box, rng);
    const int k = pick_step(rng);
    const Action a0 = random_action(spec.action0, rng);
    const Action a1 = random_action(spec.action1, rng);
    const double t = grid[k];

    PathView view(grid.data(), states.data(), spec.dim, k);
    const Vec b = spec.drift(t, view, a0, a1);
    const Mat sig = spec.vol(t, view, a0, a1);
    const double f = spec.eval_cost(t, view, a0, a1);

    audit.max_asymmetry =
        std::max(audit.max_asymmetry, max_abs(Mat(sig - sig.transpose())));
    audit.max_bound_excess = std::max(
        {audit.max_bound_excess, max_abs(b) - spec.bounds.drift,
         max_abs(sig) - spec.bounds.vol,
         std::abs(f) - spec.bounds.running_cost});

    auto future = states;
    perturb_after(future, spec.dim, k, rng);
    PathView other(grid.data(), future.data(), spec.dim, k);
    double change = max_abs(Vec(spec.drift(t, other, a0, a1) - b));
    change = std::max(change, max_abs(Mat(spec.vol(t, other, a0, a1) - sig)));
    change = std::max(change, std::abs(spec.eval_cost(t, other, a0, a1) - f));
    if (spec.girsanov) {
      change = std::max(change, max_abs(Vec(spec.girsanov(t, other, a0, a1) -
                                            spec.girsanov(t, view, a0, a1))));
    }
    audit.max_anticipation = std::max(audit.max_anticipation, change);
    ++audit.samples;
  }
  audit.max_bound_excess = std::max(0.0, audit.max_bound_excess);
  return audit;
}

int count_anticipations(const ScenarioSpec& spec, const ControlLaw& law,
                        int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto grid = uniform_grid(spec.horizon, kAuditSteps);
  std::uniform_int_distribution<int> pick_step(0, kAuditSteps - 1);
  int count = 0;
  for (int s = 0; s < n; ++s) {
    auto states = random_path(spec.dim, spec.box_half_width, rng);
    const int k = pick_step(rng);
    auto future = states;
    perturb_after(future, spec.dim, k, rng);
    const Action x = law(k, PathView(grid.data(), states.data(), spec.dim, k));
    const Action y = law(k, PathView(grid.data(), future.data(), spec.dim, k));
    if (x.size() != y.size() || (x - y).cwiseAbs().maxCoeff() > 0.0) ++count;
  }
  return count;
}

ScenarioSpec girsanov_reduced(const ScenarioSpec& spec) {
  if (!spec.girsanov) {
    throw Error(ErrorCode::kInvalidState,
                "scenario " + spec.name + " declares no lambda");
  }
  ScenarioSpec out = spec;
  out.name = spec.name + "/reduced";
  out.drift = [b = spec.drift, s = spec.vol, l = spec.girsanov](
                  double t, const PathView& p, const Action& a0,
                  const Action& a1) -> Vec {
    return b(t, p, a0, a1) - s(t, p, a0, a1) * l(t, p, a0, a1);
  };
  out.closed_form = nullptr;
  out.saddle_laws.reset();
  return out;
}

ScenarioSpec with_girsanov(const ScenarioSpec& spec, DriftFn lambda) {
  ScenarioSpec out = spec;
  out.girsanov = std::move(lambda);
  return out;
}

}  // namespace gamelab
