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

#include "gamelab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gamelab/error.hpp"

namespace gamelab {
namespace {

void check_solvable(const ScenarioSpec& spec) {
  if (!spec.markovian) {
    throw Error(ErrorCode::kInvalidArgument,
                "finite differences need a Markovian scenario: " + spec.name);
  }
  if (spec.dim > 2) {
    throw Error(ErrorCode::kInvalidArgument, "finite differences need d <= 2");
  }
}

// max over the tables used by the solver of max a_ii / dx^2 + max |b_i| / dx.
double cfl_rate(const ScenarioSpec& spec, const StateGrid& states,
                const ActionGrid& actions) {
  const double dx = states.spacing();
  std::vector<double> times = {0.0};
  if (!spec.time_homogeneous) {
    times = {0.0, 0.25 * spec.horizon, 0.5 * spec.horizon,
             0.75 * spec.horizon, spec.horizon};
  }
  double rate = 0.0;
  for (double t : times) {
    const CoefficientTable table(spec, states, actions, t);
    rate = std::max(rate, table.max_diffusion() / (dx * dx) +
                              table.max_drift() / dx);
  }
  return rate;
}

std::vector<int> saved_steps(int n_t, int n_saved) {
  std::vector<int> steps;
  const int m = std::max(2, n_saved);
  for (int j = 0; j < m; ++j) {
    const int s = static_cast<int>(
        std::llround(static_cast<double>(j) * n_t / (m - 1)));
    if (steps.empty() || s != steps.back()) steps.push_back(s);
  }
  return steps;
}

}  // namespace

FdGrid FdGrid::with_cfl(const ScenarioSpec& spec, const Vec& lower,
                        const Vec& upper, int n_x,
                        const ActionGrid& actions) {
  check_solvable(spec);
  FdGrid g;
  g.lower = lower;
  g.upper = upper;
  g.n_x = n_x;
  g.horizon = spec.horizon;
  const double rate = cfl_rate(spec, g.states(), actions);
  g.n_t = std::max(
      1, static_cast<int>(std::ceil(spec.horizon * rate / kCflBound - 1e-9)));
  return g;
}

FdGrid FdGrid::centered(const ScenarioSpec& spec, double half_width, int n_x,
                        const ActionGrid& actions) {
  return with_cfl(spec, Vec::Constant(spec.dim, -half_width),
                  Vec::Constant(spec.dim, half_width), n_x, actions);
}

double cfl_number(const ScenarioSpec& spec, const FdGrid& grid,
                  const ActionGrid& actions) {
  return grid.dt() * cfl_rate(spec, grid.states(), actions);
}

double fd_update(const ScenarioSpec&, const StateGrid& states,
                 const CoefficientTable& coefficients,
                 const std::vector<double>& next, int node, double dt,
                 Side which, int n0, int n1) {
  thread_local std::vector<double> payoff;
  payoff.resize(static_cast<std::size_t>(n0) * n1);
  const double dx = states.spacing();
  const double dx2 = dx * dx;
  const double c = next[node];
  if (states.dim() == 1) {
    const double e = next[states.shifted_clamped(node, 1)];
    const double w = next[states.shifted_clamped(node, -1)];
    const double d2 = (e - 2.0 * c + w) / dx2;
    const double fwd = (e - c) / dx;
    const double bwd = (c - w) / dx;
    const double ctr = 0.5 * (e - w) / dx;
    for (int p = 0; p < n0 * n1; ++p) {
      const double* r = coefficients.record(node, p);
      const double b = r[0];
      const double a = r[1];
      const double drift =
          a >= std::abs(b) * dx ? b * ctr : (b > 0.0 ? b * fwd : b * bwd);
      payoff[p] = 0.5 * a * d2 + drift + r[2];
    }
  } else {
    const double e = next[states.shifted_clamped(node, 1, 0)];
    const double w = next[states.shifted_clamped(node, -1, 0)];
    const double n = next[states.shifted_clamped(node, 0, 1)];
    const double s = next[states.shifted_clamped(node, 0, -1)];
    const double ne = next[states.shifted_clamped(node, 1, 1)];
    const double sw = next[states.shifted_clamped(node, -1, -1)];
    const double se = next[states.shifted_clamped(node, 1, -1)];
    const double nw = next[states.shifted_clamped(node, -1, 1)];
    const double d11 = (e - 2.0 * c + w) / dx2;
    const double d22 = (n - 2.0 * c + s) / dx2;
    const double dpp = (ne - 2.0 * c + sw) / dx2;
    const double dpm = (se - 2.0 * c + nw) / dx2;
    const double fwd[2] = {(e - c) / dx, (n - c) / dx};
    const double bwd[2] = {(c - w) / dx, (c - s) / dx};
    const double ctr[2] = {0.5 * (e - w) / dx, 0.5 * (n - s) / dx};
    for (int p = 0; p < n0 * n1; ++p) {
      const double* r = coefficients.record(node, p);
      const double cross = std::abs(r[4]);
      const double w0 = std::max(r[2] - cross, 0.0);
      const double w1 = std::max(r[3] - cross, 0.0);
      double h = 0.5 * (w0 * d11 + w1 * d22 +
                        cross * (r[4] >= 0.0 ? dpp : dpm));
      const double wi[2] = {w0, w1};
      for (int i = 0; i < 2; ++i) {
        const double b = r[i];
        h += wi[i] >= std::abs(b) * dx ? b * ctr[i]
                                       : (b > 0.0 ? b * fwd[i] : b * bwd[i]);
      }
      payoff[p] = h + r[5];
    }
  }
  const auto mm = minimax(payoff, n0, n1);
  return c + dt * (which == Side::kUpper ? mm.upper : mm.lower);
}

PdeSolution solve_isaacs(const ScenarioSpec& spec, const FdGrid& grid,
                         Side which, const ActionGrid& actions) {
  check_solvable(spec);
  if (grid.lower.size() != spec.dim || grid.n_t < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid does not fit scenario");
  }
  const StateGrid states = grid.states();
  const double rate = cfl_rate(spec, states, actions);
  const double dt = grid.dt();
  PdeSolution sol;
  sol.grid = grid;
  sol.which = which;
  sol.cfl = dt * rate;
  if (sol.cfl > kCflBound * (1.0 + 1e-12)) {
    const long need =
        static_cast<long>(std::ceil(grid.horizon * rate / kCflBound - 1e-9));
    throw Error(ErrorCode::kStabilityViolation,
                "CFL number " + std::to_string(sol.cfl) +
                    " exceeds 1/2; need n_t >= " + std::to_string(need),
                need);
  }
  const int n0 = static_cast<int>(actions.a0.size());
  const int n1 = static_cast<int>(actions.a1.size());
  const int size = states.size();
  const int nx = states.n_per_dim();

  std::vector<double> xi(size);
  for (int i = 0; i < size; ++i) {
    const PointPath point(grid.horizon, states.node(i));
    xi[i] = spec.terminal_cost(point.view());
  }
  // Inward neighbour of every boundary node.
  std::vector<std::pair<int, int>> boundary;
  for (int i = 0; i < size; ++i) {
    if (!states.on_boundary(i)) continue;
    const auto mi = states.multi_index(i);
    const int i0 = std::clamp(mi[0], 1, nx - 2);
    const int i1 = states.dim() == 2 ? std::clamp(mi[1], 1, nx - 2) : 0;
    boundary.emplace_back(i, states.index(i0, i1));
  }

  sol.steps = saved_steps(grid.n_t, grid.n_saved);
  sol.values.resize(sol.steps.size());
  int slot = static_cast<int>(sol.steps.size()) - 1;
  std::vector<double> next = xi;
  std::vector<double> cur(size);
  sol.values[slot--] = next;

  std::shared_ptr<const CoefficientTable> table;
  if (spec.time_homogeneous) {
    table = std::make_shared<const CoefficientTable>(spec, states, actions, 0.0);
  }
  for (int k = grid.n_t - 1; k >= 0; --k) {
    if (!spec.time_homogeneous) {
      table = std::make_shared<const CoefficientTable>(spec, states, actions,
                                                       k * dt);
    }
    for (int i = 0; i < size; ++i) {
      if (states.on_boundary(i)) continue;
      cur[i] = fd_update(spec, states, *table, next, i, dt, which, n0, n1);
    }
    for (const auto& [b, in] : boundary) cur[b] = xi[b] + cur[in] - xi[in];
    for (int i = 0; i < size; ++i) {
      if (!std::isfinite(cur[i])) {
        throw Error(ErrorCode::kNumericalBlowup,
                    "non-finite value at step " + std::to_string(k), k);
      }
    }
    std::swap(cur, next);
    if (slot >= 0 && sol.steps[slot] == k) sol.values[slot--] = next;
  }
  return sol;
}

PdeSolution solve_isaacs(const ScenarioSpec& spec, const FdGrid& grid,
                         Side which) {
  return solve_isaacs(spec, grid, which, ActionGrid::from(spec));
}

double PdeSolution::value(int slice, const Vec& x) const {
  return values.at(slice)[grid.states().nearest(x)];
}

double PdeSolution::value_at_origin() const {
  return value(0, Vec::Zero(grid.lower.size()));
}

ErrorSummary closed_form_error_at(const PdeSolution& sol,
                                  const ClosedFormFn& formula, int slice,
                                  double trim) {
  const StateGrid states = sol.grid.states();
  ErrorSummary e;
  double ss = 0.0;
  const double t = sol.time(slice);
  for (int i = 0; i < states.size(); ++i) {
    if (!states.in_trimmed_interior(i, trim)) continue;
    const double err = std::abs(sol.values[slice][i] - formula(t, states.node(i)));
    e.max_abs = std::max(e.max_abs, err);
    ss += err * err;
    ++e.count;
  }
  e.l2 = e.count ? std::sqrt(ss / e.count) : 0.0;
  return e;
}

ErrorSummary closed_form_error(const PdeSolution& sol,
                               const ClosedFormFn& formula, double trim) {
  ErrorSummary total;
  double ss = 0.0;
  for (int s = 0; s < sol.n_slices(); ++s) {
    const auto e = closed_form_error_at(sol, formula, s, trim);
    total.max_abs = std::max(total.max_abs, e.max_abs);
    ss += e.l2 * e.l2 * e.count;
    total.count += e.count;
  }
  total.l2 = total.count ? std::sqrt(ss / total.count) : 0.0;
  return total;
}

const SaddleReport& SaddleField::at(double t, const Vec& x) const {
  int slice = 0;
  for (int s = 1; s < static_cast<int>(times.size()); ++s) {
    if (std::abs(times[s] - t) < std::abs(times[slice] - t)) slice = s;
  }
  return reports[slice][grid.states().nearest(x)];
}

ControlLaw SaddleField::law0() const {
  auto self = std::make_shared<const SaddleField>(*this);
  return ControlLaw(
      [self](int, const PathView& p) { return self->at(p.time(), p.current()).a0; },
      "pde saddle field, player 0");
}

ControlLaw SaddleField::law1() const {
  auto self = std::make_shared<const SaddleField>(*this);
  return ControlLaw(
      [self](int, const PathView& p) { return self->at(p.time(), p.current()).a1; },
      "pde saddle field, player 1");
}

SaddleField saddle_field(const PdeSolution& upper, const PdeSolution& lower,
                         const ScenarioSpec& spec, const ActionGrid& actions,
                         double gap_tol, int n_slices, double saddle_tol) {
  if (upper.values.size() != lower.values.size() ||
      upper.grid.n_x != lower.grid.n_x || upper.grid.n_t != lower.grid.n_t) {
    throw Error(ErrorCode::kInvalidArgument, "upper/lower grids differ");
  }
  const StateGrid states = upper.grid.states();
  for (int s = 0; s < upper.n_slices(); ++s) {
    for (int i = 0; i < states.size(); ++i) {
      if (!states.in_trimmed_interior(i, 0.1)) continue;
      if (std::abs(upper.values[s][i] - lower.values[s][i]) > gap_tol) {
        throw Error(ErrorCode::kNoSaddleField,
                    "upper and lower solutions differ by more than " +
                        std::to_string(gap_tol),
                    s);
      }
    }
  }
  SaddleField field;
  field.grid = upper.grid;
  field.a0_grid = actions.a0;
  field.a1_grid = actions.a1;
  // Slices before the terminal one, evenly thinned to n_slices.
  const int avail = std::max(1, upper.n_slices() - 1);
  const int m = std::clamp(n_slices, 1, avail);
  std::vector<int> chosen;
  for (int j = 0; j < m; ++j) {
    const int s = m == 1 ? 0 : static_cast<int>(std::llround(
                                   static_cast<double>(j) * (avail - 1) / (m - 1)));
    if (chosen.empty() || s != chosen.back()) chosen.push_back(s);
  }
  const double dx = states.spacing();
  const int d = states.dim();
  for (int s : chosen) {
    const auto& v = upper.values[s];
    const double t = upper.time(s);
    std::vector<SaddleReport> row;
    row.reserve(states.size());
    for (int i = 0; i < states.size(); ++i) {
      Vec z(d);
      Mat gam = Mat::Zero(d, d);
      const double c = v[i];
      for (int a = 0; a < d; ++a) {
        const double up = v[states.shifted_clamped(i, a == 0, a == 1)];
        const double dn = v[states.shifted_clamped(i, -(a == 0), -(a == 1))];
        z[a] = (up - dn) / (2.0 * dx);
        gam(a, a) = (up - 2.0 * c + dn) / (dx * dx);
      }
      if (d == 2) {
        gam(0, 1) = gam(1, 0) =
            (v[states.shifted_clamped(i, 1, 1)] -
             v[states.shifted_clamped(i, 1, -1)] -
             v[states.shifted_clamped(i, -1, 1)] +
             v[states.shifted_clamped(i, -1, -1)]) /
            (4.0 * dx * dx);
      }
      const PointPath point(t, states.node(i));
      row.push_back(saddle_point(spec, make_query(point, t, z, gam), actions,
                                 saddle_tol));
    }
    field.times.push_back(t);
    field.reports.push_back(std::move(row));
  }
  return field;
}

}  // namespace gamelab
