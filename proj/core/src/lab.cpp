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

#include "gamelab/lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>

#include "json.hpp"

#include "gamelab/error.hpp"
#include "gamelab/hamiltonian.hpp"

namespace gamelab {

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path);
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error(ErrorCode::kIo, "write failed: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

std::vector<std::string> coord_header(int dim) {
  std::vector<std::string> h = {"t"};
  for (int i = 0; i < dim; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

void push_coords(std::vector<std::string>& row, const Vec& x) {
  for (int i = 0; i < x.size(); ++i) row.push_back(fmt(x[i]));
}

// Every step for short tables, otherwise about 33 evenly spaced ones.
std::vector<int> slice_steps(int n_steps, int dim) {
  std::vector<int> out;
  if (dim > 1) return {0};
  const int stride = std::max(1, n_steps / 32);
  for (int k = 0; k < n_steps; k += stride) out.push_back(k);
  out.push_back(n_steps);
  return out;
}

}  // namespace

void write_lattice_csv(const std::string& path, const Lattice& lattice,
                       const ValueTable& table) {
  const StateGrid& g = lattice.states();
  auto header = coord_header(g.dim());
  header.insert(header.end(), {"upper", "lower", "gap"});
  Csv csv(path, header);
  for (int k : slice_steps(lattice.n_steps(), g.dim())) {
    for (int node = 0; node < g.size(); ++node) {
      std::vector<std::string> row = {fmt(lattice.time(k))};
      push_coords(row, g.node(node));
      const double u = table.upper[k][node];
      const double l = table.lower[k][node];
      row.insert(row.end(), {fmt(u), fmt(l), fmt(u - l)});
      csv.row(row);
    }
  }
}

void write_pde_csv(const std::string& path, const PdeSolution& upper,
                   const PdeSolution& lower, const ClosedFormFn& reference) {
  const StateGrid g = upper.grid.states();
  auto header = coord_header(g.dim());
  header.insert(header.end(), {"upper", "lower", "reference"});
  Csv csv(path, header);
  const int last = upper.n_slices() - 1;
  std::vector<int> slices;
  if (g.dim() == 1) {
    for (int s = 0; s <= last; ++s) slices.push_back(s);
  } else {
    slices.push_back(0);
  }
  for (int s : slices) {
    const double t = upper.time(s);
    for (int node = 0; node < g.size(); ++node) {
      const Vec x = g.node(node);
      std::vector<std::string> row = {fmt(t)};
      push_coords(row, x);
      row.push_back(fmt(upper.values[s][node]));
      row.push_back(fmt(lower.values[s][node]));
      row.push_back(reference ? fmt(reference(t, x)) : "");
      csv.row(row);
    }
  }
}

void write_bsde_csv(const std::string& path, const BsdeSolution& sol) {
  std::vector<std::string> header = {"step", "t", "y_mean", "y_std"};
  for (int j = 0; j < sol.dim; ++j) header.push_back("z" + std::to_string(j) + "_mean");
  header.insert(header.end(), {"rank", "n_functions", "fallback_cells", "r2"});
  Csv csv(path, header);
  for (int k = 0; k < sol.n_steps; ++k) {
    double m = 0.0, ss = 0.0;
    Vec zm = Vec::Zero(sol.dim);
    for (int i = 0; i < sol.n_paths; ++i) {
      m += sol.y_at(i, k);
      zm += sol.z_at(i, k);
    }
    m /= sol.n_paths;
    zm /= sol.n_paths;
    for (int i = 0; i < sol.n_paths; ++i) {
      ss += (sol.y_at(i, k) - m) * (sol.y_at(i, k) - m);
    }
    std::vector<std::string> row = {std::to_string(k), fmt(k * sol.dt), fmt(m),
                                    fmt(std::sqrt(ss / sol.n_paths))};
    for (int j = 0; j < sol.dim; ++j) row.push_back(fmt(zm[j]));
    const auto& d = sol.diagnostics[k];
    row.insert(row.end(), {std::to_string(d.rank), std::to_string(d.n_functions),
                           std::to_string(d.fallback_cells), fmt(d.r2)});
    csv.row(row);
  }
}

void write_saddle_field_csv(const std::string& path, const SaddleField& field) {
  const StateGrid g = field.grid.states();
  auto header = coord_header(g.dim());
  const int ad0 = field.a0_grid.empty() ? 1 : field.a0_grid[0].size();
  const int ad1 = field.a1_grid.empty() ? 1 : field.a1_grid[0].size();
  for (int j = 0; j < ad0; ++j) header.push_back("a0_" + std::to_string(j));
  for (int j = 0; j < ad1; ++j) header.push_back("a1_" + std::to_string(j));
  header.push_back("is_saddle");
  Csv csv(path, header);
  for (std::size_t s = 0; s < field.times.size(); ++s) {
    for (int node = 0; node < g.size(); ++node) {
      const SaddleReport& r = field.reports[s][node];
      std::vector<std::string> row = {fmt(field.times[s])};
      push_coords(row, g.node(node));
      push_coords(row, r.a0);
      push_coords(row, r.a1);
      row.push_back(r.is_saddle ? "1" : "0");
      csv.row(row);
    }
  }
}

NoValueResult demo_no_value(double T, double c, double rho,
                            const SimConfig& cfg) {
  const ScenarioSpec spec =
      load_scenario("strong-gap", {{"T", T}, {"c", c}, {"rho", rho}});
  auto noise_sign = [](int axis, const char* name) {
    return ControlLaw(
        [axis](int, const PathView& w) { return vec1(sgn(w.coord(w.step(), axis))); },
        name);
  };
  const std::vector<ControlLaw> family = {
      constant_control(vec1(-1.0)), constant_control(vec1(0.0)),
      constant_control(vec1(1.0)), noise_sign(0, "sgn(W1)"),
      noise_sign(1, "sgn(W2)")};

  NoValueResult res;
  // Copycat: player 0 reproduces player 1's action, which bounds the lower
  // value from above.
  bool first = true;
  for (const auto& a1 : family) {
    const CostEstimate e =
        estimate_cost(spec, simulate_strong(spec, a1, a1, cfg));
    if (first || e.mean > res.lower_bound.mean) {
      res.lower_bound = e;
      res.lower_law = "copycat vs " + a1.description();
      first = false;
    }
  }
  // Constant responder -sgn(E int a0) against each player-0 law.
  first = true;
  const ControlLaw zero = constant_control(vec1(0.0));
  for (const auto& a0 : family) {
    const SimBatch probe = simulate_strong(spec, a0, zero, cfg);
    double x0 = 0.0;
    for (int i = 0; i < probe.n_paths(); ++i) {
      for (int k = 0; k < probe.n_steps(); ++k) x0 += probe.action0(i, k)[0];
    }
    x0 *= probe.dt() / probe.n_paths();
    const ControlLaw responder = sign_responder(x0);
    const CostEstimate e =
        estimate_cost(spec, simulate_strong(spec, a0, responder, cfg));
    if (first || e.mean < res.upper_bound.mean) {
      res.upper_bound = e;
      res.upper_law = a0.description() + " vs " + responder.description();
      first = false;
    }
  }
  res.pooled_std_error =
      std::hypot(res.lower_bound.std_error, res.upper_bound.std_error);
  const double diff = res.upper_bound.mean - res.lower_bound.mean;
  res.separation = res.pooled_std_error > 0.0
                       ? diff / res.pooled_std_error
                       : (diff > 0.0 ? std::numeric_limits<double>::infinity()
                                     : 0.0);
  res.condition = 2.0 * (1.0 - rho) * c * c < T;
  if (!res.condition) {
    res.verdict = "inconclusive";
  } else if (diff > 6.0 * res.pooled_std_error) {
    res.verdict = "gap";
  } else {
    res.verdict = "no-gap-detected";
  }
  return res;
}

std::vector<LambdaCase> default_lambda_family(const ScenarioSpec& spec) {
  const int d = spec.dim;
  std::vector<LambdaCase> out;
  out.push_back({"zero", [d](double, const PathView&, const Action&,
                             const Action&) { return Vec(Vec::Zero(d)); }});
  if (spec.girsanov) {
    const DriftFn full = spec.girsanov;
    out.push_back({"sigma-inverse-b", full});
    out.push_back({"half-sigma-inverse-b",
                   [full](double t, const PathView& p, const Action& a0,
                          const Action& a1) {
                     return Vec(0.5 * full(t, p, a0, a1));
                   }});
  }
  out.push_back({"constant", [d](double, const PathView&, const Action&,
                                 const Action&) {
                   Vec v(d);
                   for (int i = 0; i < d; ++i) v[i] = i % 2 == 0 ? 0.5 : -0.5;
                   return v;
                 }});
  return out;
}

GirsanovReport girsanov_invariance_suite(
    const ScenarioSpec& spec, const std::vector<LambdaCase>& family,
    const std::pair<ControlLaw, ControlLaw>& laws, const SimConfig& cfg) {
  GirsanovReport rep;
  rep.passed = true;
  const CostEstimate direct = estimate_cost(
      spec, simulate_feedback(spec, laws.first, laws.second, cfg));
  for (const auto& lc : family) {
    const ScenarioSpec reduced = girsanov_reduced(with_girsanov(spec, lc.lambda));
    const SimBatch batch = girsanov_weights(
        reduced, simulate_feedback(reduced, laws.first, laws.second, cfg));
    GirsanovCase gc;
    gc.name = lc.name;
    gc.direct = direct;
    gc.reweighted = estimate_cost(reduced, batch);
    std::vector<double> w(batch.n_paths());
    for (int i = 0; i < batch.n_paths(); ++i) w[i] = batch.weight(i);
    gc.mean_weight = summarize(w, batch.antithetic());
    gc.pooled_std_error = std::hypot(direct.std_error, gc.reweighted.std_error);
    gc.agree = std::abs(direct.mean - gc.reweighted.mean) <=
               3.0 * gc.pooled_std_error + 1e-12 * (1.0 + std::abs(direct.mean));
    gc.weight_ok = std::abs(gc.mean_weight.mean - 1.0) <=
                   3.0 * gc.mean_weight.std_error + 1e-12;
    rep.passed = rep.passed && gc.agree && gc.weight_ok;
    rep.cases.push_back(gc);
  }
  return rep;
}

RunConfig RunConfig::from_json(const std::string& text, std::string* name) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be an object");
  }
  RunConfig cfg;
  auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kInvalidArgument, key + " must be a number");
    }
    return v.get<double>();
  };
  auto count = [&](const json& v, const std::string& key) {
    const double x = number(v, key);
    if (!(x >= 1.0) || x != std::floor(x) || x > 1e8) {
      throw Error(ErrorCode::kInvalidArgument,
                  key + " must be a positive integer");
    }
    return static_cast<int>(x);
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "name") {
      if (!v.is_string()) {
        throw Error(ErrorCode::kInvalidArgument, "name must be a string");
      }
      if (name) *name = v.get<std::string>();
    } else if (key == "params" || key == "grids") {
      if (!v.is_object()) {
        throw Error(ErrorCode::kInvalidArgument, key + " must be an object");
      }
      for (const auto& [k, x] : v.items()) cfg.overrides[k] = number(x, k);
    } else if (key == "run") {
      if (!v.is_object()) {
        throw Error(ErrorCode::kInvalidArgument, "run must be an object");
      }
      for (const auto& [k, x] : v.items()) {
        if (k == "lattice_n_time") cfg.lattice_n_time = count(x, k);
        else if (k == "lattice_n_space") cfg.lattice_n_space = count(x, k);
        else if (k == "pde_n_space") cfg.pde_n_space = count(x, k);
        else if (k == "mc_paths") cfg.mc_paths = count(x, k);
        else if (k == "mc_steps") cfg.mc_steps = count(x, k);
        else if (k == "bsde_paths") cfg.bsde_paths = count(x, k);
        else if (k == "bsde_steps") cfg.bsde_steps = count(x, k);
        else if (k == "basis") {
          if (!x.is_string()) {
            throw Error(ErrorCode::kInvalidArgument, "basis must be a string");
          }
          cfg.basis = x.get<std::string>();
          RegressionBasis::parse(cfg.basis);
        } else if (k == "quiet") {
          if (!x.is_boolean()) {
            throw Error(ErrorCode::kInvalidArgument, "quiet must be a boolean");
          }
          cfg.quiet = x.get<bool>();
        } else {
          throw Error(ErrorCode::kInvalidArgument, "unknown run key '" + k + "'");
        }
      }
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
    }
  }
  return cfg;
}

namespace {

struct Tolerance {
  const char* scenario;
  const char* method;
  double value;
};

// Refinement study results; see docs/refinement-study.md.
constexpr Tolerance kTolerances[] = {
    {"weak-drift-game", "lattice-upper", 1e-2},
    {"weak-drift-game", "lattice-lower", 1e-2},
    {"weak-drift-game", "pde-upper", 1e-2},
    {"weak-drift-game", "pde-lower", 1e-2},
    {"weak-drift-game", "mc-saddle", 1e-2},
    {"weak-drift-game", "bsde-y0", 5e-2},
    {"weak-degenerate", "lattice-upper", 1e-1},
    {"weak-degenerate", "lattice-lower", 1e-1},
    {"weak-degenerate", "pde-upper", 2e-2},
    {"weak-degenerate", "pde-lower", 2e-2},
    {"weak-degenerate", "mc-saddle", 1e-2},
    {"barlow-control", "lattice-upper", 2e-2},
    {"barlow-control", "lattice-lower", 2e-2},
    {"barlow-control", "pde-upper", 5e-3},
    {"barlow-control", "pde-lower", 5e-3},
    {"barlow-control", "mc-saddle", 1e-2},
    {"barlow-game", "lattice-upper", 2e-2},
    {"barlow-game", "lattice-lower", 2e-2},
    {"barlow-game", "pde-upper", 1e-2},
    {"barlow-game", "pde-lower", 1e-2},
    {"barlow-game", "mc-saddle", 1e-2},
    {"barlow-weak", "lattice-upper", 2e-2},
    {"barlow-weak", "lattice-lower", 2e-2},
    {"barlow-weak", "pde-upper", 1e-2},
    {"barlow-weak", "pde-lower", 1e-2},
    {"barlow-weak", "mc-saddle", 1e-2},
};

// Methods run for a scenario and their discretizations.
struct Plan {
  bool lattice = false;
  int lat_nt = 64, lat_nx = 61, lat_na0 = 3, lat_na1 = 3;
  double lat_half = 3.0;
  bool pde = false;
  int pde_nx = 81, pde_na0 = 3, pde_na1 = 3;
  double pde_half = 2.0;
  double pde_error_tol = -1.0;  // closed-form interior error check
  bool mc = false;
  bool bsde = false;
  bool saddle_check = false;
  bool girsanov = false;
  bool saddle_field = false;
  bool no_value = false;
  bool lattice_gap = false;  // expected lattice gap 2T (bilinear)
  bool isaacs_grid = false;  // Isaacs gap at resolution 41 vanishes
};

Plan plan_for(const ScenarioSpec& spec) {
  Plan p;
  const std::string& n = spec.name;
  if (n == "weak-drift-game") {
    p.lattice = p.pde = p.mc = p.bsde = p.saddle_check = p.girsanov = true;
    p.saddle_field = p.isaacs_grid = true;
    p.lat_nx = 101;
    p.lat_half = 5.0;
  } else if (n == "weak-degenerate") {
    p.lattice = p.pde = p.mc = p.isaacs_grid = true;
    p.lat_half = 1.0;
    p.lat_nx = 81;
    p.lat_nt = 256;
    p.pde_half = 0.5;
    p.pde_nx = 101;
    p.pde_error_tol = 2e-2;
  } else if (n == "barlow-control" || n == "barlow-game" ||
             n == "barlow-weak") {
    p.lattice = p.pde = p.mc = p.isaacs_grid = true;
    p.lat_half = 8.0;
    p.lat_nx = 161;
    p.lat_na0 = 21;
    p.lat_na1 = n == "barlow-control" ? 1 : 2;
    p.pde_half = 2.0;
    p.pde_nx = 201;
    p.pde_na0 = 21;
    p.pde_na1 = p.lat_na1;
    p.pde_error_tol = n == "barlow-control" ? 5e-3 : 1e-2;
  } else if (n == "strong-gap") {
    p.no_value = true;
  } else if (n == "bilinear") {
    p.lattice = p.pde = p.lattice_gap = true;
    p.lat_na0 = p.lat_na1 = 2;
    p.pde_na0 = p.pde_na1 = 2;
    p.pde_nx = 41;
    p.pde_half = 3.0;
  } else if (n == "state-indep-range") {
    p.mc = p.isaacs_grid = true;
  }
  return p;
}

using Clock = std::chrono::steady_clock;

class StageRunner {
 public:
  StageRunner(ExperimentReport& report, std::vector<StageTiming>& timings,
              bool quiet)
      : report_(report), timings_(timings), quiet_(quiet) {}

  bool operator()(const std::string& name, const std::function<void()>& body) {
    const auto start = Clock::now();
    StageRecord rec{name, "ok", ""};
    try {
      body();
    } catch (const std::exception& e) {
      rec.status = "failed";
      rec.error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    timings_.push_back({name, secs});
    report_.stages.push_back(rec);
    if (!quiet_) {
      std::cerr << "[" << name << "] " << rec.status;
      if (!rec.error.empty()) std::cerr << ": " << rec.error;
      std::cerr << " (" << fmt(secs) << " s)\n";
    }
    return rec.status == "ok";
  }

 private:
  ExperimentReport& report_;
  std::vector<StageTiming>& timings_;
  bool quiet_;
};

// Checks lower_H <= upper_H on random queries; returns the largest excess.
double isaacs_order_excess(const ScenarioSpec& spec, int n, std::uint64_t seed,
                           const ActionGrid& grid) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  const int d = spec.dim;
  for (int q = 0; q < n; ++q) {
    Vec x(d), z(d);
    Mat g(d, d);
    for (int i = 0; i < d; ++i) {
      x[i] = spec.box_half_width * unif(rng);
      z[i] = 2.0 * normal(rng);
      for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = 2.0 * normal(rng);
    }
    const double t = spec.horizon * 0.5 * (1.0 + unif(rng));
    const PointPath pt(t, x);
    const HamiltonianQuery hq = make_query(pt, t, z, g);
    const auto pay = payoff_matrix(spec, hq, grid);
    const auto mm = minimax(pay, static_cast<int>(grid.a0.size()),
                            static_cast<int>(grid.a1.size()));
    worst = std::max(worst, mm.lower - mm.upper);
  }
  return worst;
}

double max_isaacs_gap(const ScenarioSpec& spec, int n, std::uint64_t seed,
                      const ActionGrid& grid) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  const int d = spec.dim;
  for (int q = 0; q < n; ++q) {
    Vec x(d), z(d);
    Mat g(d, d);
    for (int i = 0; i < d; ++i) {
      x[i] = spec.box_half_width * unif(rng);
      z[i] = 2.0 * normal(rng);
      for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = 2.0 * normal(rng);
    }
    const PointPath pt(0.0, x);
    worst = std::max(worst, isaacs_gap(spec, make_query(pt, 0.0, z, g), grid));
  }
  return worst;
}

Lattice build_lattice_auto(const ScenarioSpec& spec, int n_t, int n_x,
                           const LatticeOptions& opt) {
  try {
    return build_lattice(spec, n_t, n_x, opt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kStabilityViolation || !e.detail()) throw;
    return build_lattice(spec, static_cast<int>(*e.detail()), n_x, opt);
  }
}

MethodValue method_value(const std::string& scenario, const std::string& method,
                         double value, double std_error,
                         const std::optional<double>& reference) {
  MethodValue m;
  m.method = method;
  m.value = value;
  m.uncertainty = std_error;
  m.reference = reference;
  const double pinned = method_tolerance(scenario, method);
  if (reference && pinned >= 0.0) {
    m.tolerance = pinned + 3.0 * std_error;
    m.pass = std::abs(value - *reference) <= m.tolerance;
  } else {
    m.tolerance = pinned >= 0.0 ? pinned : 0.0;
    m.pass = std::isfinite(value);
  }
  return m;
}

}  // namespace

double method_tolerance(const std::string& scenario,
                        const std::string& method) {
  for (const auto& t : kTolerances) {
    if (scenario == t.scenario && method == t.method) return t.value;
  }
  return -1.0;
}

ExperimentReport run(const std::string& scenario, const RunConfig& cfg,
                     const std::string& out_dir, std::uint64_t seed) {
  const ScenarioSpec spec = load_scenario(scenario, cfg.overrides);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto out = [&](const std::string& file) {
    return (fs::path(out_dir) / file).string();
  };

  ExperimentReport report;
  report.scenario = spec.name;
  report.params = spec.params;
  report.seed = seed;
  std::vector<StageTiming> timings;
  StageRunner stage(report, timings, cfg.quiet);
  const Plan plan = plan_for(spec);
  const int d = spec.dim;
  const Vec origin = Vec::Zero(d);
  std::optional<double> reference;
  if (spec.closed_form) reference = spec.closed_form(0.0, origin);
  auto add_check = [&](const std::string& name, bool pass, double value,
                       double unc, const std::string& method,
                       const std::string& detail) {
    report.checks.push_back({name, pass, value, unc, method, detail});
  };

  stage("hamiltonian", [&] {
    const ActionGrid grid = ActionGrid::from(spec);
    const double excess =
        isaacs_order_excess(spec, 125, derive_seed(seed, "isaacs"), grid);
    add_check("isaacs-order", excess <= 1e-12, excess, 0.0, "hamiltonian",
              "max(lower_H - upper_H) over 125 random queries");
    if (plan.isaacs_grid) {
      const ActionGrid g41 = ActionGrid::from(spec, 41, 41);
      const double gap =
          max_isaacs_gap(spec, 25, derive_seed(seed, "isaacs-gap"), g41);
      add_check("isaacs-gap-41", gap <= 1e-9, gap, 0.0, "hamiltonian",
                "max isaacs_gap over 25 random queries at resolution 41");
    }
  });

  if (plan.lattice) {
    stage("lattice", [&] {
      LatticeOptions opt;
      opt.half_width = plan.lat_half;
      opt.n_action0 = plan.lat_na0;
      opt.n_action1 = plan.lat_na1;
      const int nt = cfg.lattice_n_time > 0 ? cfg.lattice_n_time : plan.lat_nt;
      const int nx = cfg.lattice_n_space > 0 ? cfg.lattice_n_space : plan.lat_nx;
      const Lattice lat = build_lattice_auto(spec, nt, nx, opt);
      const ValueTable table = backward(lat, spec);
      const double up = value_at(table, lat, origin, Side::kUpper);
      const double lo = value_at(table, lat, origin, Side::kLower);
      report.methods.push_back(
          method_value(spec.name, "lattice-upper", up, 0.0, reference));
      report.methods.push_back(
          method_value(spec.name, "lattice-lower", lo, 0.0, reference));
      const double gap = value_gap(table);
      add_check("lattice-order", up >= lo - 1e-12, up - lo, 0.0, "lattice",
                "upper - lower at the origin");
      if (plan.lattice_gap) {
        const double expect = 2.0 * spec.horizon;
        add_check("lattice-gap", std::abs(up - lo - expect) <= 1e-9, up - lo,
                  0.0, "lattice", "expected gap 2T at the origin");
      } else {
        add_check("lattice-gap-max", true, gap, 0.0, "lattice",
                  "max upper - lower over nodes at t = 0");
      }
      write_lattice_csv(out("lattice_values.csv"), lat, table);
    });
  }

  std::optional<PdeSolution> pde_up, pde_lo;
  if (plan.pde) {
    stage("pde", [&] {
      const ActionGrid actions =
          ActionGrid::from(spec, plan.pde_na0, plan.pde_na1);
      const int nx = cfg.pde_n_space > 0 ? cfg.pde_n_space : plan.pde_nx;
      const FdGrid grid = FdGrid::centered(spec, plan.pde_half, nx, actions);
      pde_up = solve_isaacs(spec, grid, Side::kUpper, actions);
      pde_lo = solve_isaacs(spec, grid, Side::kLower, actions);
      report.methods.push_back(method_value(
          spec.name, "pde-upper", pde_up->value_at_origin(), 0.0, reference));
      report.methods.push_back(method_value(
          spec.name, "pde-lower", pde_lo->value_at_origin(), 0.0, reference));
      if (spec.closed_form && plan.pde_error_tol > 0.0) {
        const ErrorSummary e = closed_form_error(*pde_up, spec.closed_form);
        add_check("pde-closed-form-error", e.max_abs <= plan.pde_error_tol,
                  e.max_abs, 0.0, "pde-upper",
                  "max interior error vs the closed form, tolerance " +
                      fmt(plan.pde_error_tol));
      }
      write_pde_csv(out("pde_values.csv"), *pde_up, *pde_lo, spec.closed_form);
    });
  }

  if (plan.saddle_field && pde_up && pde_lo) {
    stage("saddle-field", [&] {
      const ActionGrid actions =
          ActionGrid::from(spec, plan.pde_na0, plan.pde_na1);
      const SaddleField field =
          saddle_field(*pde_up, *pde_lo, spec, actions, 1e-6);
      write_saddle_field_csv(out("saddle_field.csv"), field);
    });
  }

  SimConfig mc;
  mc.n_paths = cfg.mc_paths;
  mc.n_steps = cfg.mc_steps;
  if (plan.mc) {
    stage("monte-carlo", [&] {
      mc.seed = derive_seed(seed, "mc");
      // Without a known saddle law both players hold the middle grid action.
      const auto mid = [](const ActionSet& set) {
        const auto pts = set.discretize();
        return constant_control(pts[pts.size() / 2]);
      };
      const auto laws = spec.saddle_laws
                            ? *spec.saddle_laws
                            : std::make_pair(mid(spec.action0), mid(spec.action1));
      const CostEstimate e =
          estimate_cost(spec, simulate_feedback(spec, laws.first, laws.second, mc));
      const std::string name = spec.saddle_laws ? "mc-saddle" : "mc-reference";
      report.methods.push_back(
          method_value(spec.name, name, e.mean, e.std_error,
                       spec.saddle_laws ? reference : std::nullopt));
      Csv csv(out("mc_estimates.csv"), {"method", "mean", "std_error", "n"});
      csv.row({name, fmt(e.mean), fmt(e.std_error), std::to_string(e.n)});
    });
  }

  std::shared_ptr<const BsdeSolution> bsde;
  const ActionGrid grid3 = ActionGrid::from(spec, 3, 3);
  if (plan.bsde) {
    stage("bsde", [&] {
      SimConfig fc;
      fc.n_paths = cfg.bsde_paths;
      fc.n_steps = cfg.bsde_steps;
      fc.seed = derive_seed(seed, "bsde");
      auto forward = std::make_shared<const SimBatch>(simulate_reference(spec, fc));
      BsdeOptions opt;
      opt.basis = RegressionBasis::parse(cfg.basis);
      auto sol = std::make_shared<BsdeSolution>(
          solve_bsde(spec, hamiltonian_driver(spec, grid3), forward, opt));
      bsde = sol;
      report.methods.push_back(method_value(spec.name, "bsde-y0", sol->y0.mean,
                                            sol->y0.std_error, reference));
      write_bsde_csv(out("bsde_steps.csv"), *sol);
    });
  }

  if (plan.saddle_check) {
    stage("saddle-check", [&] {
      SimConfig sc = mc;
      sc.seed = derive_seed(seed, "saddle");
      const auto candidate =
          bsde ? extract_saddle_controls(bsde, hamiltonian_saddle_map(spec, grid3))
               : *spec.saddle_laws;
      const SaddleCheck chk = verify_saddle(
          spec, candidate, standard_deviations(spec.action0, candidate.first),
          standard_deviations(spec.action1, candidate.second), sc);
      double worst = std::numeric_limits<double>::infinity();
      Csv csv(out("saddle_check.csv"),
              {"player", "deviation", "cost", "std_error", "slack", "holds"});
      csv.row({"candidate", candidate.first.description() + " / " +
                                candidate.second.description(),
               fmt(chk.candidate.mean), fmt(chk.candidate.std_error), "", ""});
      for (const auto& dv : chk.deviations) {
        worst = std::min(worst, dv.slack);
        csv.row({std::to_string(dv.player), dv.description, fmt(dv.cost.mean),
                 fmt(dv.cost.std_error), fmt(dv.slack), dv.holds ? "1" : "0"});
      }
      add_check("saddle-inequalities", chk.passed, worst, 0.0, "monte-carlo",
                "smallest slack of the 3-sigma saddle inequalities");
    });
  }

  if (plan.girsanov && spec.saddle_laws) {
    stage("girsanov", [&] {
      SimConfig gc = mc;
      gc.seed = derive_seed(seed, "girsanov");
      const GirsanovReport g = girsanov_invariance_suite(
          spec, default_lambda_family(spec), *spec.saddle_laws, gc);
      Csv csv(out("girsanov.csv"),
              {"case", "direct", "direct_se", "reweighted", "reweighted_se",
               "mean_weight", "mean_weight_se", "agree", "weight_ok"});
      for (const auto& c : g.cases) {
        csv.row({c.name, fmt(c.direct.mean), fmt(c.direct.std_error),
                 fmt(c.reweighted.mean), fmt(c.reweighted.std_error),
                 fmt(c.mean_weight.mean), fmt(c.mean_weight.std_error),
                 c.agree ? "1" : "0", c.weight_ok ? "1" : "0"});
        add_check("girsanov-" + c.name, c.agree && c.weight_ok,
                  c.reweighted.mean - c.direct.mean, c.pooled_std_error,
                  "monte-carlo", "reweighted - direct cost");
      }
    });
  }

  if (plan.no_value) {
    stage("no-value", [&] {
      SimConfig nc;
      nc.n_paths = 100000;
      nc.n_steps = 32;
      nc.seed = derive_seed(seed, "no-value");
      const double T = spec.param("T");
      const double c = spec.param("c");
      const double rho = spec.param("rho");
      const NoValueResult r = demo_no_value(T, c, rho, nc);
      const double lo_ref = 2.0 * (1.0 - rho) * c * c * T;
      const double up_ref = T * T;
      add_check("no-value-lower-bound",
                r.lower_bound.mean <= lo_ref + 3.0 * r.lower_bound.std_error,
                r.lower_bound.mean, r.lower_bound.std_error, "monte-carlo",
                r.lower_law + "; bound " + fmt(lo_ref));
      add_check("no-value-upper-bound",
                r.upper_bound.mean >= up_ref - 3.0 * r.upper_bound.std_error,
                r.upper_bound.mean, r.upper_bound.std_error, "monte-carlo",
                r.upper_law + "; bound " + fmt(up_ref));
      add_check("no-value-verdict", !r.condition || r.verdict == "gap",
                r.separation, 0.0, "monte-carlo", "verdict " + r.verdict);
      Csv csv(out("no_value.csv"), {"bound", "law", "mean", "std_error"});
      csv.row({"lower", r.lower_law, fmt(r.lower_bound.mean),
               fmt(r.lower_bound.std_error)});
      csv.row({"upper", r.upper_law, fmt(r.upper_bound.mean),
               fmt(r.upper_bound.std_error)});
    });
  }

  add_cross_deltas(report);
  write_text(out("report.json"), to_json(report));
  write_text(out("timings.json"), timings_json(timings));
  return report;
}

}  // namespace gamelab
