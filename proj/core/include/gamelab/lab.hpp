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

#ifndef GAMELAB_LAB_HPP_
#define GAMELAB_LAB_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gamelab/bsde.hpp"
#include "gamelab/control.hpp"
#include "gamelab/lattice.hpp"
#include "gamelab/pde.hpp"
#include "gamelab/registry.hpp"
#include "gamelab/report.hpp"
#include "gamelab/scenario.hpp"
#include "gamelab/sde.hpp"

namespace gamelab {

struct NoValueResult {
  CostEstimate lower_bound;  // max over player-1 laws of J(copycat, a1)
  CostEstimate upper_bound;  // min over player-0 laws of J(a0, responder)
  std::string lower_law;
  std::string upper_law;
  double pooled_std_error = 0.0;
  double separation = 0.0;  // (upper - lower) / pooled std error
  bool condition = false;   // 2 (1 - rho) c^2 < T
  std::string verdict;      // "gap", "no-gap-detected", "inconclusive"
};

// Strong-formulation bounds for the tracking game with
// X^i = int a_i dt + sigma W, xi = |X^1_T - X^2_T|^2. Uses the strong-gap
// registry entry with (T, c, rho) overridden.
NoValueResult demo_no_value(double T, double c, double rho,
                            const SimConfig& cfg);

struct LambdaCase {
  std::string name;
  DriftFn lambda;
};

struct GirsanovCase {
  std::string name;
  CostEstimate direct;
  CostEstimate reweighted;
  CostEstimate mean_weight;
  double pooled_std_error = 0.0;
  bool agree = false;
  bool weight_ok = false;
};

struct GirsanovReport {
  std::vector<GirsanovCase> cases;
  bool passed = false;
};

// lambda = 0, lambda = sigma^{-1} b, lambda = sigma^{-1} b / 2 and a
// constant lambda.
std::vector<LambdaCase> default_lambda_family(const ScenarioSpec& spec);

// For each lambda: direct Euler cost under spec vs the cost of
// girsanov_reduced(with_girsanov(spec, lambda)) reweighted by the
// likelihood ratio, with the same laws and the same seed.
GirsanovReport girsanov_invariance_suite(
    const ScenarioSpec& spec, const std::vector<LambdaCase>& family,
    const std::pair<ControlLaw, ControlLaw>& laws, const SimConfig& cfg);

// Per-method settings of `run`. Zero means the scenario default.
struct RunConfig {
  Overrides overrides;
  int lattice_n_time = 0;
  int lattice_n_space = 0;
  int pde_n_space = 0;
  int mc_paths = 20000;
  int mc_steps = 64;
  int bsde_paths = 20000;
  int bsde_steps = 32;
  std::string basis = "poly2";
  bool quiet = false;

  // Scenario-file JSON {name, params, grids, run}; unknown keys rejected.
  static RunConfig from_json(const std::string& text, std::string* name);
};

// Runs the methods declared for the scenario and writes report.json,
// timings.json and per-method CSVs into out_dir (created if missing).
// Stage failures are recorded in the report, never thrown; unknown
// scenario names throw kNotFound.
ExperimentReport run(const std::string& scenario, const RunConfig& cfg,
                     const std::string& out_dir, std::uint64_t seed);

// Pinned per-method tolerance against the reference value, from the
// refinement study; Monte Carlo methods add 3 standard errors on top.
// Returns a negative number for pairs without a pinned value.
double method_tolerance(const std::string& scenario, const std::string& method);

// CSV writers; the column layouts are documented in docs/csv-formats.md.
void write_lattice_csv(const std::string& path, const Lattice& lattice,
                       const ValueTable& table);
void write_pde_csv(const std::string& path, const PdeSolution& upper,
                   const PdeSolution& lower, const ClosedFormFn& reference);
void write_bsde_csv(const std::string& path, const BsdeSolution& sol);
void write_saddle_field_csv(const std::string& path, const SaddleField& field);

}  // namespace gamelab

#endif  // GAMELAB_LAB_HPP_
