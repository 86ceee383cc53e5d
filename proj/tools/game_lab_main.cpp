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

// game-lab: command line front end of the gamelab library.

#include <chrono>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <memory>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gamelab/bsde.hpp"
#include "gamelab/error.hpp"
#include "gamelab/hamiltonian.hpp"
#include "gamelab/lab.hpp"
#include "gamelab/lattice.hpp"
#include "gamelab/pde.hpp"
#include "gamelab/registry.hpp"
#include "gamelab/report.hpp"
#include "gamelab/sde.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace gamelab;

struct Globals {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 1;
  bool quiet = false;
};

json estimate_json(const CostEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}};
}

std::string out_file(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

void emit(const Globals& g, const std::string& name, const json& j) {
  const std::string text = j.dump(2) + "\n";
  write_text(out_file(g, name), text);
  if (!g.quiet) std::cout << text;
}

RunConfig load_config(const Globals& g, std::string* scenario) {
  if (g.config.empty()) return RunConfig{};
  return RunConfig::from_json(read_text(g.config), scenario);
}

Overrides parse_sets(const std::vector<std::string>& sets) {
  Overrides o;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "--set expects key=value: " + s);
    }
    try {
      o[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "not a number: " + s);
    }
  }
  return o;
}

std::pair<ControlLaw, ControlLaw> laws_for(const ScenarioSpec& spec,
                                           const std::string& which) {
  if (which == "saddle") {
    if (!spec.saddle_laws) {
      throw Error(ErrorCode::kInvalidArgument,
                  spec.name + " has no registered saddle laws");
    }
    return *spec.saddle_laws;
  }
  if (which == "first") {
    return {constant_control(spec.action0.discretize().front()),
            constant_control(spec.action1.discretize().front())};
  }
  throw Error(ErrorCode::kInvalidArgument,
              "--laws must be 'saddle' or 'first'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for two-player zero-sum stochastic "
               "differential games"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Scenario/run configuration JSON");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  std::string stage = "startup";
  std::string scenario;
  std::vector<std::string> sets;
  int n_paths = 20000, n_steps = 64, n_time = 64, n_space = 61;
  int n_action0 = 3, n_action1 = 3;
  double half_width = 0.0;
  std::string basis = "poly2", laws = "saddle";
  bool strong = false, antithetic = false;
  double T = 4.0, c = 1.0, rho = 0.0;
  int queries = 1000, resolution = 41;

  auto* run_cmd = app.add_subcommand("run", "Run every method for a scenario");
  run_cmd->add_option("scenario", scenario, "Registered scenario name");
  run_cmd->add_option("--set", sets, "Parameter override key=value");

  auto* sim_cmd = app.add_subcommand("simulate", "Euler Monte Carlo cost");
  sim_cmd->add_option("--scenario", scenario)->required();
  sim_cmd->add_option("--set", sets);
  sim_cmd->add_option("--npaths", n_paths);
  sim_cmd->add_option("--nsteps", n_steps);
  sim_cmd->add_option("--laws", laws, "saddle or first");
  sim_cmd->add_flag("--strong", strong, "Controls read the Brownian path");
  sim_cmd->add_flag("--antithetic", antithetic);

  auto* dpp_cmd = app.add_subcommand("dpp", "Lattice dynamic programming");
  dpp_cmd->add_option("--scenario", scenario)->required();
  dpp_cmd->add_option("--set", sets);
  dpp_cmd->add_option("--nt", n_time);
  dpp_cmd->add_option("--nx", n_space);
  dpp_cmd->add_option("--na0", n_action0, "Action grid points, player 0");
  dpp_cmd->add_option("--na1", n_action1, "Action grid points, player 1");
  dpp_cmd->add_option("--half-width", half_width);

  auto* pde_cmd = app.add_subcommand("pde", "Finite-difference Isaacs solver");
  pde_cmd->add_option("--scenario", scenario)->required();
  pde_cmd->add_option("--set", sets);
  pde_cmd->add_option("--nt", n_time, "Time steps; 0 picks the CFL bound")
      ->default_val(0);
  pde_cmd->add_option("--nx", n_space);
  pde_cmd->add_option("--na0", n_action0);
  pde_cmd->add_option("--na1", n_action1);
  pde_cmd->add_option("--half-width", half_width);

  auto* bsde_cmd = app.add_subcommand("bsde", "Regression Monte Carlo BSDE");
  bsde_cmd->add_option("--scenario", scenario)->required();
  bsde_cmd->add_option("--set", sets);
  bsde_cmd->add_option("--npaths", n_paths);
  bsde_cmd->add_option("--nsteps", n_steps);
  bsde_cmd->add_option("--basis", basis, "poly<p>, lc<m> or ll<m>");

  auto* ham_cmd = app.add_subcommand("hamiltonian-scan",
                                     "Isaacs gap statistics on random queries");
  ham_cmd->add_option("--scenario", scenario)->required();
  ham_cmd->add_option("--set", sets);
  ham_cmd->add_option("--queries", queries);
  ham_cmd->add_option("--resolution", resolution);

  auto* nv_cmd = app.add_subcommand("no-value", "Strong-formulation bounds");
  nv_cmd->add_option("--T", T);
  nv_cmd->add_option("--c", c);
  nv_cmd->add_option("--rho", rho);
  nv_cmd->add_option("--npaths", n_paths);
  nv_cmd->add_option("--nsteps", n_steps);

  auto* gir_cmd = app.add_subcommand("girsanov", "Girsanov invariance suite");
  gir_cmd->add_option("--scenario", scenario)->required();
  gir_cmd->add_option("--set", sets);
  gir_cmd->add_option("--npaths", n_paths);
  gir_cmd->add_option("--nsteps", n_steps);

  CLI11_PARSE(app, argc, argv);

  try {
    stage = "config";
    std::string config_scenario;
    RunConfig cfg = load_config(g, &config_scenario);
    if (scenario.empty()) scenario = config_scenario;
    for (const auto& [k, v] : parse_sets(sets)) cfg.overrides[k] = v;
    cfg.quiet = cfg.quiet || g.quiet;

    if (run_cmd->parsed()) {
      stage = "run";
      if (scenario.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "no scenario given");
      }
      const ExperimentReport r = run(scenario, cfg, g.out, g.seed);
      int code = 0;
      for (const auto& s : r.stages) {
        if (s.status != "ok") {
          std::cerr << "game-lab: stage " << s.name << " failed: " << s.error
                    << "\n";
          code = 1;
        }
      }
      for (const auto& m : r.methods) {
        if (!m.pass) code = 1;
        if (!g.quiet) {
          std::cout << m.method << " = " << m.value << " +- " << m.uncertainty
                    << (m.pass ? "" : "  FAIL") << "\n";
        }
      }
      for (const auto& ch : r.checks) {
        if (!ch.pass) {
          std::cerr << "game-lab: check " << ch.name << " failed\n";
          code = 1;
        }
      }
      for (const auto& d : r.deltas) {
        if (!d.pass) code = 1;
      }
      return code;
    }

    stage = "load-scenario";
    const std::string name = nv_cmd->parsed() ? "strong-gap" : scenario;
    const ScenarioSpec spec = load_scenario(name, cfg.overrides);

    if (sim_cmd->parsed()) {
      stage = "simulate";
      SimConfig sc{n_steps, n_paths, g.seed, antithetic};
      const auto pair = laws_for(spec, laws);
      const SimBatch batch =
          strong ? simulate_strong(spec, pair.first, pair.second, sc)
                 : simulate_feedback(spec, pair.first, pair.second, sc);
      {
        std::ofstream csv(out_file(g, "simulate_paths.csv"));
        csv << "path_id,weight";
        for (int i = 0; i < spec.dim; ++i) csv << ",x" << i << "_T";
        csv << ",cost\n";
        csv.precision(12);
        const auto costs = path_costs(spec, batch);
        for (int p = 0; p < batch.n_paths(); ++p) {
          csv << p << ',' << batch.weight(p);
          const Vec x = batch.state(p, batch.n_steps());
          for (int i = 0; i < spec.dim; ++i) csv << ',' << x[i];
          csv << ',' << costs[p] << '\n';
        }
      }
      emit(g, "simulate.json",
           {{"scenario", spec.name},
            {"scheme", to_string(batch.scheme())},
            {"laws", pair.first.description() + " / " +
                         pair.second.description()},
            {"cost", estimate_json(estimate_cost(spec, batch))}});
    } else if (dpp_cmd->parsed()) {
      stage = "dpp";
      LatticeOptions opt;
      opt.half_width = half_width;
      opt.n_action0 = n_action0;
      opt.n_action1 = n_action1;
      const auto start = std::chrono::steady_clock::now();
      const Lattice lat = build_lattice(spec, n_time, n_space, opt);
      const ValueTable table = backward(lat, spec);
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      const Vec origin = Vec::Zero(spec.dim);
      write_lattice_csv(out_file(g, "lattice_values.csv"), lat, table);
      emit(g, "dpp.json",
           {{"scenario", spec.name},
            {"upper", value_at(table, lat, origin, Side::kUpper)},
            {"lower", value_at(table, lat, origin, Side::kLower)},
            {"max_gap", value_gap(table)},
            {"residual_max",
             viscosity_residual(table, lat, spec, Side::kUpper).max_abs},
            {"n_time", lat.n_steps()},
            {"n_space", n_space},
            {"runtime_seconds", secs}});
    } else if (pde_cmd->parsed()) {
      stage = "pde";
      const ActionGrid actions = ActionGrid::from(spec, n_action0, n_action1);
      const double hw = half_width > 0.0 ? half_width : spec.box_half_width;
      FdGrid grid = FdGrid::centered(spec, hw, n_space, actions);
      if (n_time > 0) grid.n_t = n_time;
      const PdeSolution up = solve_isaacs(spec, grid, Side::kUpper, actions);
      const PdeSolution lo = solve_isaacs(spec, grid, Side::kLower, actions);
      write_pde_csv(out_file(g, "pde_values.csv"), up, lo, spec.closed_form);
      json j = {{"scenario", spec.name},
                {"upper", up.value_at_origin()},
                {"lower", lo.value_at_origin()},
                {"n_time", grid.n_t},
                {"n_space", n_space},
                {"cfl", up.cfl}};
      if (spec.closed_form) {
        j["max_interior_error"] = closed_form_error(up, spec.closed_form).max_abs;
      }
      emit(g, "pde.json", j);
    } else if (bsde_cmd->parsed()) {
      stage = "bsde";
      SimConfig sc{n_steps, n_paths, g.seed, false};
      auto forward = std::make_shared<const SimBatch>(simulate_reference(spec, sc));
      BsdeOptions opt;
      opt.basis = RegressionBasis::parse(basis);
      const BsdeSolution sol = solve_bsde(
          spec, hamiltonian_driver(spec, ActionGrid::from(spec, 3, 3)), forward,
          opt);
      write_bsde_csv(out_file(g, "bsde_steps.csv"), sol);
      json z0 = json::array();
      for (int i = 0; i < sol.z0.size(); ++i) z0.push_back(sol.z0[i]);
      emit(g, "bsde.json",
           {{"scenario", spec.name},
            {"basis", opt.basis.name()},
            {"y0", estimate_json(sol.y0)},
            {"z0", z0}});
    } else if (ham_cmd->parsed()) {
      stage = "hamiltonian-scan";
      const ActionGrid grid = ActionGrid::from(spec, resolution, resolution);
      std::mt19937_64 rng(g.seed);
      std::normal_distribution<double> normal;
      double max_gap = 0.0, min_gap = INFINITY, order_excess = -INFINITY;
      std::ofstream csv(out_file(g, "hamiltonian_scan.csv"));
      csv << "query";
      for (int i = 0; i < spec.dim; ++i) csv << ",z" << i;
      for (int i = 0; i < spec.dim; ++i) {
        for (int j = 0; j < spec.dim; ++j) csv << ",gamma" << i << j;
      }
      csv << ",upper_H,lower_H,gap\n";
      csv.precision(12);
      for (int q = 0; q < queries; ++q) {
        Vec x(spec.dim), z(spec.dim);
        Mat gm(spec.dim, spec.dim);
        for (int i = 0; i < spec.dim; ++i) {
          x[i] = normal(rng);
          z[i] = 2.0 * normal(rng);
          for (int j = 0; j <= i; ++j) gm(i, j) = gm(j, i) = 2.0 * normal(rng);
        }
        const PointPath pt(0.0, x);
        const HamiltonianQuery hq = make_query(pt, 0.0, z, gm);
        const double up = upper_H(spec, hq, grid);
        const double lo = lower_H(spec, hq, grid);
        csv << q;
        for (int i = 0; i < spec.dim; ++i) csv << ',' << z[i];
        for (int i = 0; i < spec.dim; ++i) {
          for (int j = 0; j < spec.dim; ++j) csv << ',' << gm(i, j);
        }
        csv << ',' << up << ',' << lo << ',' << up - lo << '\n';
        max_gap = std::max(max_gap, up - lo);
        min_gap = std::min(min_gap, up - lo);
        order_excess = std::max(order_excess, lo - up);
      }
      emit(g, "hamiltonian_scan.json",
           {{"scenario", spec.name},
            {"queries", queries},
            {"resolution", resolution},
            {"max_gap", max_gap},
            {"min_gap", min_gap},
            {"max_order_excess", order_excess}});
    } else if (nv_cmd->parsed()) {
      stage = "no-value";
      SimConfig sc{n_steps, n_paths, g.seed, false};
      const NoValueResult r = demo_no_value(T, c, rho, sc);
      emit(g, "no_value.json",
           {{"T", T},
            {"c", c},
            {"rho", rho},
            {"lower_bound", estimate_json(r.lower_bound)},
            {"upper_bound", estimate_json(r.upper_bound)},
            {"lower_law", r.lower_law},
            {"upper_law", r.upper_law},
            {"separation", std::isfinite(r.separation) ? json(r.separation)
                                                       : json("inf")},
            {"condition", r.condition},
            {"verdict", r.verdict}});
    } else if (gir_cmd->parsed()) {
      stage = "girsanov";
      SimConfig sc{n_steps, n_paths, g.seed, false};
      const auto pair = laws_for(spec, "saddle");
      const GirsanovReport rep = girsanov_invariance_suite(
          spec, default_lambda_family(spec), pair, sc);
      json cases = json::array();
      for (const auto& gc : rep.cases) {
        cases.push_back({{"name", gc.name},
                         {"direct", estimate_json(gc.direct)},
                         {"reweighted", estimate_json(gc.reweighted)},
                         {"mean_weight", estimate_json(gc.mean_weight)},
                         {"agree", gc.agree},
                         {"weight_ok", gc.weight_ok}});
      }
      emit(g, "girsanov.json",
           {{"scenario", spec.name}, {"cases", cases}, {"passed", rep.passed}});
      return rep.passed ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "game-lab: " << stage << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kNotFound ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "game-lab: " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
