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

#include "gamelab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamelab/error.hpp"

namespace gamelab {
namespace {

// Probabilities of one (node, action pair) for jump length k cells.
struct Probs {
  double up[2] = {0.0, 0.0};
  double down[2] = {0.0, 0.0};
  double diag = 0.0;  // each of the two diagonal moves
  int diag_sign = 1;
  double total = 0.0;
};

struct Split {
  double w[2] = {0.0, 0.0};
  double b[2] = {0.0, 0.0};
  double cross = 0.0;
  int sign = 1;
};

Split split_record(const double* rec, int dim) {
  Split s;
  if (dim == 1) {
    s.b[0] = rec[0];
    s.w[0] = rec[1];
    return s;
  }
  s.b[0] = rec[0];
  s.b[1] = rec[1];
  const double a12 = rec[4];
  s.cross = std::abs(a12);
  s.sign = a12 >= 0.0 ? 1 : -1;
  s.w[0] = rec[2] - s.cross;
  s.w[1] = rec[3] - s.cross;
  for (double& w : s.w) {
    if (w < -1e-12 * (1.0 + s.cross)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "covariance is not diagonally dominant");
    }
    w = std::max(w, 0.0);
  }
  return s;
}

bool chain_probs(const Split& s, int dim, double dt, double dx, int k,
                 Probs& p) {
  const double J = k * dx;
  p.total = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double q = s.w[i] * dt / (J * J);
    const double m = s.b[i] * dt / J;
    if (q >= std::abs(m)) {
      p.up[i] = 0.5 * (q + m);
      p.down[i] = 0.5 * (q - m);
    } else {
      p.up[i] = 0.5 * q + std::max(m, 0.0);
      p.down[i] = 0.5 * q + std::max(-m, 0.0);
    }
    p.total += p.up[i] + p.down[i];
  }
  p.diag = 0.5 * s.cross * dt / (J * J);
  p.diag_sign = s.sign;
  p.total += 2.0 * p.diag;
  return p.total <= 1.0 + 1e-14;
}

}  // namespace

Lattice::Lattice(StateGrid grid, ActionGrid actions, int n_steps,
                 double horizon)
    : grid_(std::move(grid)),
      actions_(std::move(actions)),
      n_steps_(n_steps),
      horizon_(horizon),
      dt_(horizon / n_steps) {}

const CoefficientTable& Lattice::coefficients(int step) const {
  return *tables_[tables_.size() == 1 ? 0 : step];
}

void Lattice::transitions(int step, int node, int i0, int i1,
                          std::vector<Transition>& out) const {
  const CoefficientTable& table = coefficients(step);
  const Split s = split_record(table.record(node, i0 * n1() + i1), grid_.dim());
  Probs p;
  int k = 1;
  while (!chain_probs(s, grid_.dim(), dt_, grid_.spacing(), k, p)) {
    if (++k > max_jump_) {
      throw Error(ErrorCode::kStabilityViolation,
                  "no admissible jump for this node");
    }
  }
  const std::size_t first = out.size();
  out.push_back({node, 0.0});
  if (grid_.dim() == 1) {
    if (p.up[0] > 0.0) out.push_back({grid_.shifted_clamped(node, k), p.up[0]});
    if (p.down[0] > 0.0) {
      out.push_back({grid_.shifted_clamped(node, -k), p.down[0]});
    }
  } else {
    if (p.up[0] > 0.0) {
      out.push_back({grid_.shifted_clamped(node, k, 0), p.up[0]});
    }
    if (p.down[0] > 0.0) {
      out.push_back({grid_.shifted_clamped(node, -k, 0), p.down[0]});
    }
    if (p.up[1] > 0.0) {
      out.push_back({grid_.shifted_clamped(node, 0, k), p.up[1]});
    }
    if (p.down[1] > 0.0) {
      out.push_back({grid_.shifted_clamped(node, 0, -k), p.down[1]});
    }
    if (p.diag > 0.0) {
      const int o = p.diag_sign * k;
      out.push_back({grid_.shifted_clamped(node, k, o), p.diag});
      out.push_back({grid_.shifted_clamped(node, -k, -o), p.diag});
    }
  }
  out[first].prob = 1.0 - p.total;
}

double Lattice::running_cost(int step, int node, int i0, int i1) const {
  const CoefficientTable& table = coefficients(step);
  return table.record(node, i0 * n1() + i1)[table.stride() - 1];
}

Lattice build_lattice(const ScenarioSpec& spec, int n_t, int n_x,
                      const LatticeOptions& options) {
  if (!spec.markovian) {
    throw Error(ErrorCode::kInvalidArgument,
                "lattice needs a Markovian scenario: " + spec.name);
  }
  if (spec.dim > 2) {
    throw Error(ErrorCode::kInvalidArgument, "lattice supports d <= 2");
  }
  if (n_t < 1) throw Error(ErrorCode::kInvalidArgument, "n_t must be >= 1");
  const double half =
      options.half_width > 0.0 ? options.half_width : spec.box_half_width;
  const int na0 =
      options.n_action0 > 0 ? options.n_action0 : spec.grids.n_action0;
  const int na1 =
      options.n_action1 > 0 ? options.n_action1 : spec.grids.n_action1;
  Lattice lat(StateGrid::centered(spec.dim, half, n_x),
              ActionGrid::from(spec, na0, na1), n_t, spec.horizon);
  lat.max_jump_ = options.max_jump;

  const int n_tables = spec.time_homogeneous ? 1 : n_t;
  for (int k = 0; k < n_tables; ++k) {
    lat.tables_.push_back(std::make_shared<const CoefficientTable>(
        spec, lat.grid_, lat.actions_, lat.time(k)));
  }

  // Every (node, pair) must admit a jump; otherwise report the n_t that
  // makes the longest jump admissible everywhere.
  const double dx = lat.grid_.spacing();
  const double jmax = options.max_jump * dx;
  double need = 0.0;
  bool ok = true;
  Probs p;
  for (const auto& table : lat.tables_) {
    for (int node = 0; node < lat.grid_.size(); ++node) {
      for (int pair = 0; pair < table->pairs(); ++pair) {
        const Split s = split_record(table->record(node, pair), spec.dim);
        double rate = s.cross / (jmax * jmax);
        for (int i = 0; i < spec.dim; ++i) {
          rate += s.w[i] / (jmax * jmax) + std::abs(s.b[i]) / jmax;
        }
        need = std::max(need, rate);
        if (!ok) continue;
        bool found = false;
        for (int k = 1; k <= options.max_jump && !found; ++k) {
          found = chain_probs(s, spec.dim, lat.dt_, dx, k, p);
        }
        ok = found;
      }
    }
  }
  if (!ok) {
    const long required = static_cast<long>(std::ceil(spec.horizon * need));
    throw Error(ErrorCode::kStabilityViolation,
                "time step too large for positive transition weights; need "
                "n_t >= " + std::to_string(required),
                required);
  }
  return lat;
}

std::vector<double> dpp_step(const Lattice& lattice, const ScenarioSpec&,
                             const std::vector<double>& next, int step,
                             Side side, std::vector<int>* arg0,
                             std::vector<int>* arg1) {
  const int nodes = lattice.states().size();
  const int n0 = lattice.n0();
  const int n1 = lattice.n1();
  const double dt = lattice.dt();
  std::vector<double> out(nodes);
  std::vector<double> payoff(static_cast<std::size_t>(n0) * n1);
  std::vector<Transition> trans;
  trans.reserve(16);
  if (arg0) arg0->assign(nodes, 0);
  if (arg1) arg1->assign(nodes, 0);
  for (int node = 0; node < nodes; ++node) {
    for (int i0 = 0; i0 < n0; ++i0) {
      for (int i1 = 0; i1 < n1; ++i1) {
        trans.clear();
        lattice.transitions(step, node, i0, i1, trans);
        double e = 0.0;
        for (const auto& tr : trans) e += tr.prob * next[tr.target];
        payoff[i0 * n1 + i1] =
            e + lattice.running_cost(step, node, i0, i1) * dt;
      }
    }
    const auto mm = minimax(payoff, n0, n1);
    if (side == Side::kUpper) {
      out[node] = mm.upper;
      if (arg0) (*arg0)[node] = mm.upper_row;
      if (arg1) (*arg1)[node] = mm.upper_col;
    } else {
      out[node] = mm.lower;
      if (arg0) (*arg0)[node] = mm.lower_row;
      if (arg1) (*arg1)[node] = mm.lower_col;
    }
  }
  return out;
}

namespace {

ValueTable init_table(const Lattice& lattice) {
  ValueTable t;
  const StateGrid& g = lattice.states();
  t.dt = lattice.dt();
  t.n_per_dim = g.n_per_dim();
  t.dim = g.dim();
  t.nodes.reserve(g.size());
  for (int i = 0; i < g.size(); ++i) t.nodes.push_back(g.node(i));
  return t;
}

std::vector<double> terminal_slice(const Lattice& lattice,
                                   const ScenarioSpec& spec) {
  const StateGrid& g = lattice.states();
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const PointPath point(lattice.horizon(), g.node(i));
    v[i] = spec.terminal_cost(point.view());
  }
  return v;
}

void run_side(const Lattice& lattice, const ScenarioSpec& spec, Side side,
              std::vector<std::vector<double>>& values,
              std::vector<std::vector<int>>& a0,
              std::vector<std::vector<int>>& a1) {
  const int n = lattice.n_steps();
  values.assign(n + 1, {});
  a0.assign(n, {});
  a1.assign(n, {});
  values[n] = terminal_slice(lattice, spec);
  for (int k = n - 1; k >= 0; --k) {
    values[k] = dpp_step(lattice, spec, values[k + 1], k, side, &a0[k], &a1[k]);
  }
}

}  // namespace

ValueTable backward_upper(const Lattice& lattice, const ScenarioSpec& spec) {
  ValueTable t = init_table(lattice);
  run_side(lattice, spec, Side::kUpper, t.upper, t.upper_a0, t.upper_a1);
  return t;
}

ValueTable backward_lower(const Lattice& lattice, const ScenarioSpec& spec) {
  ValueTable t = init_table(lattice);
  run_side(lattice, spec, Side::kLower, t.lower, t.lower_a0, t.lower_a1);
  return t;
}

ValueTable backward(const Lattice& lattice, const ScenarioSpec& spec) {
  ValueTable t = init_table(lattice);
  run_side(lattice, spec, Side::kUpper, t.upper, t.upper_a0, t.upper_a1);
  run_side(lattice, spec, Side::kLower, t.lower, t.lower_a0, t.lower_a1);
  return t;
}

double value_gap(const ValueTable& table) {
  if (table.upper.empty() || table.lower.empty()) {
    throw Error(ErrorCode::kInvalidState, "table lacks one of the sides");
  }
  double gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.upper[0].size(); ++i) {
    gap = std::max(gap, table.upper[0][i] - table.lower[0][i]);
  }
  return gap;
}

double value_at(const ValueTable& table, const Lattice& lattice, const Vec& x,
                Side side) {
  const auto& v = side == Side::kUpper ? table.upper : table.lower;
  if (v.empty()) throw Error(ErrorCode::kInvalidState, "side not computed");
  return v[0][lattice.states().nearest(x)];
}

ResidualField viscosity_residual(const ValueTable& table,
                                 const Lattice& lattice,
                                 const ScenarioSpec&, Side side,
                                 double trim) {
  const auto& v = side == Side::kUpper ? table.upper : table.lower;
  if (v.empty()) throw Error(ErrorCode::kInvalidState, "side not computed");
  const StateGrid& g = lattice.states();
  const int n = lattice.n_steps();
  const int n0 = lattice.n0();
  const int n1 = lattice.n1();
  const double dx = g.spacing();
  const double dt = lattice.dt();
  const int d = g.dim();
  ResidualField field;
  field.residual.assign(n, std::vector<double>(
                               g.size(), std::numeric_limits<double>::quiet_NaN()));
  std::vector<double> payoff(static_cast<std::size_t>(n0) * n1);
  for (int k = 0; k < n; ++k) {
    const auto& next = v[k + 1];
    const CoefficientTable& table_k = lattice.coefficients(k);
    for (int node = 0; node < g.size(); ++node) {
      if (!g.in_trimmed_interior(node, trim)) continue;
      const double c = next[node];
      double z[2], gam[2], cross = 0.0;
      for (int i = 0; i < d; ++i) {
        const double up = next[g.shifted_clamped(node, i == 0, i == 1)];
        const double dn = next[g.shifted_clamped(node, -(i == 0), -(i == 1))];
        z[i] = (up - dn) / (2.0 * dx);
        gam[i] = (up - 2.0 * c + dn) / (dx * dx);
      }
      if (d == 2) {
        cross = (next[g.shifted_clamped(node, 1, 1)] -
                 next[g.shifted_clamped(node, 1, -1)] -
                 next[g.shifted_clamped(node, -1, 1)] +
                 next[g.shifted_clamped(node, -1, -1)]) /
                (4.0 * dx * dx);
      }
      for (int p = 0; p < n0 * n1; ++p) {
        const double* r = table_k.record(node, p);
        if (d == 1) {
          payoff[p] = 0.5 * r[1] * gam[0] + r[0] * z[0] + r[2];
        } else {
          payoff[p] = 0.5 * (r[2] * gam[0] + r[3] * gam[1]) + r[4] * cross +
                      r[0] * z[0] + r[1] * z[1] + r[5];
        }
      }
      const auto mm = minimax(payoff, n0, n1);
      const double H = side == Side::kUpper ? mm.upper : mm.lower;
      const double res = (v[k][node] - c) / dt - H;
      field.residual[k][node] = res;
      field.max_abs = std::max(field.max_abs, std::abs(res));
    }
  }
  return field;
}

}  // namespace gamelab
