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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gamelab/error.hpp"
#include "gamelab/lattice.hpp"
#include "gamelab/registry.hpp"
#include "oracles.hpp"

namespace gamelab {
namespace {

LatticeOptions box(double half, int na0 = 0, int na1 = 0) {
  LatticeOptions o;
  o.half_width = half;
  o.n_action0 = na0;
  o.n_action1 = na1;
  return o;
}

TEST(Lattice, DriftlessUnitDiffusionProbabilities) {
  const auto spec = oracle::constant_spec(
      vec1(0.0), Mat::Identity(1, 1), 0.0,
      [](const Vec& x) { return x[0]; });
  const auto lat = build_lattice(spec, 4, 11, box(3.0));
  const double dt = 0.25, dx = 0.6;
  const double p = dt / (2.0 * dx * dx);
  std::vector<Transition> tr;
  for (int node = 1; node + 1 < 11; ++node) {
    tr.clear();
    lat.transitions(0, node, 0, 0, tr);
    ASSERT_EQ(tr.size(), 3u);
    EXPECT_EQ(tr[0].target, node);
    EXPECT_NEAR(tr[0].prob, 1.0 - 2.0 * p, 1e-15);
    EXPECT_EQ(tr[1].target, node + 1);
    EXPECT_NEAR(tr[1].prob, p, 1e-15);
    EXPECT_EQ(tr[2].target, node - 1);
    EXPECT_NEAR(tr[2].prob, p, 1e-15);
  }
}

TEST(Lattice, UnitDriftShiftsOneNode) {
  // dt = dx = 0.1: the move b dt lands exactly on the next node.
  const auto spec = oracle::constant_spec(vec1(1.0), Mat::Zero(1, 1), 0.0,
                                          [](const Vec& x) { return x[0]; });
  const auto lat = build_lattice(spec, 10, 21, box(1.0));
  std::vector<Transition> tr;
  for (int node = 0; node + 1 < 21; ++node) {
    tr.clear();
    lat.transitions(0, node, 0, 0, tr);
    double moved = 0.0;
    for (const auto& t : tr) {
      if (t.target == node + 1) moved += t.prob;
      else EXPECT_EQ(t.prob, 0.0);
    }
    EXPECT_EQ(moved, 1.0);
  }
  // So the value of xi = x is exactly x + T away from the upper boundary.
  const auto table = backward(lat, spec);
  EXPECT_NEAR(table.upper[0][5], lat.states().node(5)[0] + 1.0, 1e-12);
}

TEST(Lattice, WeakDriftGameLocalConsistency) {
  const auto spec = load_scenario("weak-drift-game");
  const auto lat = build_lattice(spec, 32, 21, box(3.0, 3, 3));
  const double dt = lat.dt();
  std::vector<Transition> tr;
  const auto& g = lat.states();
  for (int node = 0; node < g.size(); ++node) {
    const auto mi = g.multi_index(node);
    // Stay clear of clamping.
    if (mi[0] < 2 || mi[1] < 2 || mi[0] > 18 || mi[1] > 18) continue;
    for (int i0 = 0; i0 < lat.n0(); ++i0) {
      for (int i1 = 0; i1 < lat.n1(); ++i1) {
        tr.clear();
        lat.transitions(0, node, i0, i1, tr);
        for (const auto& t : tr) {
          ASSERT_GE(t.prob, 0.0);
          ASSERT_LE(t.prob, 1.0);
        }
        const auto m = oracle::moments(g, node, tr);
        EXPECT_NEAR(m.mass, 1.0, 1e-12);
        const Vec b = vec2(lat.actions().a0[i0][0], lat.actions().a1[i1][0]);
        EXPECT_NEAR(m.mean[0], b[0] * dt, 1e-12);
        EXPECT_NEAR(m.mean[1], b[1] * dt, 1e-12);
        // Var = sigma^2 dt - (b dt)^2 for the central chain.
        const Mat want = Mat::Identity(2, 2) * dt - b * b.transpose() * dt * dt;
        EXPECT_NEAR((m.cov - want).cwiseAbs().maxCoeff(), 0.0, 1e-12);
      }
    }
  }
}

TEST(Lattice, CorrelatedNoiseMoments) {
  const auto spec = load_scenario("weak-drift-game", {{"rho", 0.5}});
  const auto lat = build_lattice(spec, 64, 21, box(2.0, 3, 3));
  std::vector<Transition> tr;
  const auto& g = lat.states();
  const int node = g.index(10, 10);
  for (int i0 = 0; i0 < 3; ++i0) {
    tr.clear();
    lat.transitions(0, node, i0, 2, tr);
    const auto m = oracle::moments(g, node, tr);
    const double dt = lat.dt();
    EXPECT_NEAR(m.mass, 1.0, 1e-12);
    EXPECT_NEAR(m.mean[0], lat.actions().a0[i0][0] * dt, 1e-12);
    EXPECT_NEAR(m.cov(0, 1) + m.mean[0] * m.mean[1], 0.5 * dt, 1e-12);
  }
}

TEST(Lattice, StabilityViolationNamesRequiredSteps) {
  const auto spec = load_scenario("weak-drift-game");
  LatticeOptions o = box(3.0, 3, 3);
  o.max_jump = 1;
  try {
    build_lattice(spec, 2, 61, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStabilityViolation);
    ASSERT_TRUE(e.detail().has_value());
    const int need = static_cast<int>(*e.detail());
    EXPECT_NO_THROW(build_lattice(spec, need, 61, o));
  }
}

TEST(Lattice, RejectsPathDependentGames) {
  EXPECT_THROW(build_lattice(load_scenario("state-indep-range"), 8, 11), Error);
}

TEST(Lattice, ConstantsAreFixedPoints) {
  const auto spec = oracle::constant_spec(
      vec2(0.3, -0.2), Mat::Identity(2, 2), 0.0,
      [](const Vec&) { return 1.25; });
  const auto lat = build_lattice(spec, 8, 11, box(2.0));
  const auto table = backward(lat, spec);
  for (const auto* side : {&table.upper, &table.lower}) {
    for (const auto& slice : *side) {
      for (double v : slice) EXPECT_EQ(v, 1.25);
    }
  }
  EXPECT_EQ(value_gap(table), 0.0);
  EXPECT_EQ(viscosity_residual(table, lat, spec, Side::kUpper).max_abs, 0.0);
}

TEST(Lattice, TerminalSliceIsXi) {
  const auto spec = load_scenario("weak-drift-game");
  const auto lat = build_lattice(spec, 16, 21, box(3.0, 3, 3));
  const auto table = backward(lat, spec);
  const auto& g = lat.states();
  for (int node = 0; node < g.size(); ++node) {
    const Vec x = g.node(node);
    const double d = x[0] - x[1];
    EXPECT_EQ(table.upper.back()[node], d * d);
    EXPECT_EQ(table.lower.back()[node], d * d);
  }
}

// Ordering, comparison, shift and DPP self-consistency on a few games.
class LatticeProperties : public ::testing::TestWithParam<std::string> {
 protected:
  ScenarioSpec spec() const { return load_scenario(GetParam()); }
  Lattice lattice(const ScenarioSpec& s) const {
    const int na = s.dim == 2 ? 3 : 5;
    return build_lattice(s, 16, s.dim == 2 ? 15 : 41,
                         box(s.box_half_width, na, s.action1.is_box() ? 3 : 0));
  }
};

TEST_P(LatticeProperties, LowerBelowUpperEverywhere) {
  const auto s = spec();
  const auto table = backward(lattice(s), s);
  for (std::size_t k = 0; k < table.upper.size(); ++k) {
    for (std::size_t n = 0; n < table.upper[k].size(); ++n) {
      EXPECT_LE(table.lower[k][n], table.upper[k][n] + 1e-10);
    }
  }
}

TEST_P(LatticeProperties, MonotoneInTerminalCost) {
  const auto s = spec();
  auto bumped = s;
  bumped.terminal_cost = [xi = s.terminal_cost](const PathView& p) {
    const Vec x = p.current();
    return xi(p) + 0.5 * std::exp(-x.squaredNorm());
  };
  const auto lat = lattice(s);
  const auto a = backward(lat, s);
  const auto b = backward(lat, bumped);
  for (std::size_t k = 0; k < a.upper.size(); ++k) {
    for (std::size_t n = 0; n < a.upper[k].size(); ++n) {
      EXPECT_GE(b.upper[k][n], a.upper[k][n]);
      EXPECT_GE(b.lower[k][n], a.lower[k][n]);
    }
  }
}

TEST_P(LatticeProperties, ConstantShiftIsExact) {
  const auto s = spec();
  auto shifted = s;
  shifted.terminal_cost = [xi = s.terminal_cost](const PathView& p) {
    return xi(p) + 0.75;
  };
  const auto lat = lattice(s);
  const auto a = backward(lat, s);
  const auto b = backward(lat, shifted);
  for (std::size_t k = 0; k < a.upper.size(); ++k) {
    for (std::size_t n = 0; n < a.upper[k].size(); ++n) {
      EXPECT_NEAR(b.upper[k][n] - a.upper[k][n], 0.75, 1e-12);
      EXPECT_NEAR(b.lower[k][n] - a.lower[k][n], 0.75, 1e-12);
    }
  }
}

TEST_P(LatticeProperties, OneStepRecursionIsBitExact) {
  const auto s = spec();
  const auto lat = lattice(s);
  const auto table = backward(lat, s);
  for (Side side : {Side::kUpper, Side::kLower}) {
    const auto& v = side == Side::kUpper ? table.upper : table.lower;
    std::vector<int> a0, a1;
    const auto again = dpp_step(lat, s, v[1], 0, side, &a0, &a1);
    ASSERT_EQ(again.size(), v[0].size());
    for (std::size_t n = 0; n < again.size(); ++n) {
      EXPECT_EQ(again[n], v[0][n]);
    }
    EXPECT_EQ(a0, side == Side::kUpper ? table.upper_a0[0] : table.lower_a0[0]);
  }
  // The one-sided passes agree with the joint pass.
  const auto up = backward_upper(lat, s);
  EXPECT_EQ(up.upper[0], table.upper[0]);
}

INSTANTIATE_TEST_SUITE_P(Games, LatticeProperties,
                         ::testing::Values("weak-drift-game", "barlow-game",
                                           "bilinear", "weak-degenerate"),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (char& c : n) {
                             if (c == '-') c = '_';
                           }
                           return n;
                         });

TEST(Lattice, BilinearGapIsTwoT) {
  // b = 0 and sigma = I do not depend on actions, so each step adds exactly
  // the 2x2 gap 2 dt.
  const auto spec = load_scenario("bilinear");
  const auto lat = build_lattice(spec, 16, 15, box(3.0));
  const auto table = backward(lat, spec);
  const Vec o = Vec::Zero(2);
  EXPECT_NEAR(value_at(table, lat, o, Side::kUpper) -
                  value_at(table, lat, o, Side::kLower),
              2.0, 1e-12);
  std::vector<double> m = {-1.0, 1.0, 1.0, -1.0};
  const oracle::Payoff f = [&](int i, int j) { return m[i * 2 + j]; };
  EXPECT_EQ(oracle::upper(f, 2, 2) - oracle::lower(f, 2, 2), 2.0);
  EXPECT_NEAR(value_gap(table), 2.0, 1e-12);
}

TEST(Lattice, WeakDriftGameValueAndGapRefinement) {
  const auto spec = load_scenario("weak-drift-game");
  const auto coarse = build_lattice(spec, 16, 21, box(3.0, 3, 3));
  const auto fine = build_lattice(spec, 64, 41, box(3.0, 3, 3));
  const auto tc = backward(coarse, spec);
  const auto tf = backward(fine, spec);
  const Vec o = Vec::Zero(2);
  EXPECT_NEAR(value_at(tf, fine, o, Side::kUpper), 2.0, 0.1);
  EXPECT_NEAR(value_at(tf, fine, o, Side::kLower), 2.0, 0.1);
  // Isaacs holds: the gap is already at rounding level, so it cannot grow.
  EXPECT_LE(value_gap(tc), 1e-12);
  EXPECT_LE(value_gap(tf), 1e-12);
}

TEST(Lattice, ResidualShrinksOnBarlowGame) {
  const auto spec = load_scenario("barlow-game");
  std::vector<double> res;
  for (int n : {41, 81}) {
    const auto lat = build_lattice(spec, n, n, box(4.0, 21, 2));
    const auto table = backward(lat, spec);
    res.push_back(viscosity_residual(table, lat, spec, Side::kUpper, 0.3).max_abs);
  }
  EXPECT_LT(res[1], res[0]);
}

}  // namespace
}  // namespace gamelab
