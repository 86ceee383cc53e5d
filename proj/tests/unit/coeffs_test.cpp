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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gamelab/control.hpp"
#include "gamelab/error.hpp"
#include "gamelab/registry.hpp"
#include "gamelab/zeta.hpp"

namespace gamelab {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no gamelab::Error thrown";
  return ErrorCode::kIo;
}

// A two-step path on the grid {0, T/2, T} ending at `x_half` at T/2.
struct ThreePoint {
  std::vector<double> grid;
  std::vector<double> states;
  ThreePoint(double T, double x_half, double x_end)
      : grid{0.0, T / 2, T}, states{0.0, x_half, x_end} {}
  PathView at(int k) const { return PathView(grid.data(), states.data(), 1, k); }
};

TEST(ActionSet, DiscretizeKeepsEndpoints) {
  const auto pts = ActionSet::interval(1.0, 2.0, 21).discretize();
  ASSERT_EQ(pts.size(), 21u);
  EXPECT_EQ(pts.front()[0], 1.0);
  EXPECT_EQ(pts.back()[0], 2.0);
  const auto box = ActionSet::box(vec2(-1, 0), vec2(1, 2), 3).discretize();
  ASSERT_EQ(box.size(), 9u);
  EXPECT_EQ(box.front(), vec2(-1, 0));
  EXPECT_EQ(box.back(), vec2(1, 2));
  EXPECT_EQ(box[1], vec2(-1, 1));  // last coordinate fastest
}

TEST(ActionSet, RejectsMalformedSets) {
  EXPECT_EQ(code_of([] { ActionSet::interval(2.0, 1.0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ActionSet::finite({}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ActionSet::finite({vec1(1.0), vec1(1.0)}); }),
            ErrorCode::kInvalidArgument);
}

TEST(ActionSet, Contains) {
  const auto set = ActionSet::interval(-1.0, 1.0);
  EXPECT_TRUE(set.contains(vec1(1.0)));
  EXPECT_FALSE(set.contains(vec1(1.5)));
  const auto fin = ActionSet::finite({vec1(-1.0), vec1(1.0)});
  EXPECT_TRUE(fin.contains(vec1(-1.0)));
  EXPECT_FALSE(fin.contains(vec1(0.0)));
}

TEST(SamplePath, Invariants) {
  SamplePath p;
  p.grid = uniform_grid(1.0, 2);
  p.states = {0.0, 0.5, 1.0};
  EXPECT_NO_THROW(p.validate());
  p.states[0] = 0.1;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidState);
  p.states[0] = 0.0;
  p.weight = 0.0;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidState);
  p.weight = 1.0;
  p.states.pop_back();
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidState);
}

TEST(PathView, ReadingThePastOnly) {
  ThreePoint p(1.0, 0.3, 0.7);
  const PathView v = p.at(1);
  EXPECT_EQ(v.current()[0], 0.3);
  EXPECT_EQ(v.prefix(0).current()[0], 0.0);
  EXPECT_EQ(code_of([&] { v.coord(2, 0); }), ErrorCode::kInvalidState);
}

TEST(PiecewiseConstant, SingleCellIsConstant) {
  const auto set = ActionSet::interval(-1.0, 1.0);
  const auto law = piecewise_constant_control(
      {0.0, 1.0}, {{[](const PathView&) { return true; }}}, {{vec1(1.0)}},
      set);
  ThreePoint p(1.0, -0.4, 2.0);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(law(k, p.at(k))[0], 1.0);
}

TEST(PiecewiseConstant, SignOfMidpointState) {
  const auto set = ActionSet::interval(-1.0, 1.0);
  const auto pos = [](const PathView& v) { return v.current()[0] >= 0.0; };
  const auto neg = [](const PathView& v) { return v.current()[0] < 0.0; };
  const auto always = [](const PathView&) { return true; };
  const auto law = piecewise_constant_control(
      {0.0, 0.5, 1.0}, {{always}, {pos, neg}},
      {{vec1(0.0)}, {vec1(1.0), vec1(-1.0)}}, set);
  for (double xh : {-0.3, 0.2}) {
    ThreePoint p(1.0, xh, -5.0 * xh);
    EXPECT_EQ(law(0, p.at(0))[0], 0.0);
    EXPECT_EQ(law(1, p.at(1))[0], sgn(xh));
    // On [T/2, T) the cell is read at T/2, not at the later state.
    EXPECT_EQ(law(2, p.at(2))[0], sgn(xh));
  }
}

TEST(PiecewiseConstant, Errors) {
  const auto set = ActionSet::interval(-1.0, 1.0);
  const auto always = [](const PathView&) { return true; };
  EXPECT_EQ(code_of([&] {
              piecewise_constant_control({0.0, 0.5, 0.5}, {{always}, {always}},
                                         {{vec1(0.0)}, {vec1(0.0)}}, set);
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] {
              piecewise_constant_control({0.0, 1.0}, {{always}}, {{vec1(3.0)}},
                                         set);
            }),
            ErrorCode::kDomainViolation);
}

TEST(SignResponder, PlaysMinusSign) {
  ThreePoint p(1.0, 0.0, 0.0);
  EXPECT_EQ(sign_responder(0.7)(0, p.at(0))[0], -1.0);
  EXPECT_EQ(sign_responder(-0.7)(0, p.at(0))[0], 1.0);
  // sgn(0) = +1.
  EXPECT_EQ(sign_responder(0.0)(1, p.at(1))[0], -1.0);
}

TEST(Registry, WeakDriftGameCoefficients) {
  const auto s = load_scenario("weak-drift-game", {{"T", 1}, {"c", 1}, {"rho", 0}});
  ASSERT_EQ(s.dim, 2);
  const std::vector<double> grid = {0.0};
  const Vec x = vec2(0.4, -0.5);
  PathView v(grid.data(), x.data(), 2, 0);
  EXPECT_EQ(s.drift(0, v, vec1(0.3), vec1(-0.2)), vec2(0.3, -0.2));
  EXPECT_TRUE(s.vol(0, v, vec1(0), vec1(0)).isApprox(Mat::Identity(2, 2)));
  EXPECT_EQ(s.eval_cost(0, v, vec1(1), vec1(1)), 0.0);
  EXPECT_DOUBLE_EQ(s.terminal_cost(v), 0.81);
  EXPECT_DOUBLE_EQ(s.closed_form(0.0, Vec::Zero(2)), 2.0);
}

TEST(Registry, BarlowGameCoefficients) {
  const auto s = load_scenario("barlow-game");
  EXPECT_EQ(s.action0.lower()[0], 1.0);
  EXPECT_EQ(s.action0.upper()[0], 2.0);
  EXPECT_EQ(s.action1.lower()[0], 0.0);
  EXPECT_EQ(s.action1.upper()[0], 1.0);
  const std::vector<double> grid = {0.0};
  for (double x : {-1.3, 0.0, 0.77}) {
    const Vec xv = vec1(x);
    PathView v(grid.data(), xv.data(), 1, 0);
    const double zb = zeta_bar(x);
    EXPECT_DOUBLE_EQ(s.eval_cost(0, v, vec1(1.5), vec1(0.5)),
                     zb * zb - 3.0 * zb);
    EXPECT_DOUBLE_EQ(s.terminal_cost(v), x * x);
    // With player 1 at 0 the volatility is |a0|.
    EXPECT_DOUBLE_EQ(s.vol(0, v, vec1(1.5), vec1(0.0))(0, 0), 1.5);
  }
}

TEST(Registry, StrongGapParameters) {
  const auto s = load_scenario("strong-gap", {{"T", 4}, {"c", 1}, {"rho", 0}});
  EXPECT_EQ(s.horizon, 4.0);
  EXPECT_EQ(s.action0.lower()[0], -1.0);
  EXPECT_EQ(s.action1.upper()[0], 1.0);
  const std::vector<double> grid = {0.0};
  const Vec x = Vec::Zero(2);
  PathView v(grid.data(), x.data(), 2, 0);
  EXPECT_TRUE(s.vol(0, v, vec1(0), vec1(0)).isApprox(Mat::Identity(2, 2)));
}

TEST(Registry, CorrelatedVolatilityIsSymmetricSquareRoot) {
  const auto s = load_scenario("strong-gap", {{"c", 2.0}, {"rho", 0.6}});
  const std::vector<double> grid = {0.0};
  const Vec x = Vec::Zero(2);
  PathView v(grid.data(), x.data(), 2, 0);
  const Mat sig = s.vol(0, v, vec1(0), vec1(0));
  Mat want(2, 2);
  want << 4.0, 2.4, 2.4, 4.0;
  EXPECT_TRUE((sig * sig).isApprox(want, 1e-12));
  EXPECT_EQ(sig(0, 1), sig(1, 0));
}

TEST(Registry, Errors) {
  EXPECT_EQ(code_of([] { load_scenario("no-such-game"); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(code_of([] { load_scenario("barlow-game", {{"drift", 1.0}}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { load_scenario("weak-drift-game", {{"rho", 2.0}}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { load_scenario("weak-drift-game", {{"n_space", 0.5}}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Registry, GridOverrides) {
  const auto s = load_scenario("weak-drift-game",
                               {{"n_action0", 5}, {"n_time", 12}, {"box", 4}});
  EXPECT_EQ(s.action0.grid_size(), 5u);
  EXPECT_EQ(s.grids.n_time, 12);
  EXPECT_EQ(s.box_half_width, 4.0);
}

TEST(Registry, ScenarioFile) {
  const auto s = load_scenario_json(
      R"({"name": "strong-gap", "params": {"T": 2}, "grids": {"n_space": 31}})");
  EXPECT_EQ(s.horizon, 2.0);
  EXPECT_EQ(s.grids.n_space, 31);
  EXPECT_EQ(code_of([] {
              load_scenario_json(R"({"name": "strong-gap", "extra": {}})");
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] {
              load_scenario_json(R"({"name": "strong-gap", "params": {"n_space": 3}})");
            }),
            ErrorCode::kInvalidArgument);
}

// Property suite over every registered scenario.
class EveryScenario : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryScenario, SymmetricBoundedNonAnticipative) {
  const auto spec = load_scenario(GetParam());
  const ScenarioAudit a = audit_scenario(spec, 200, 11);
  EXPECT_EQ(a.samples, 200);
  EXPECT_LE(a.max_asymmetry, 1e-12);
  EXPECT_LE(a.max_bound_excess, 1e-10);
  EXPECT_LE(a.max_anticipation, 1e-10);
}

TEST_P(EveryScenario, SaddleLawsReadOnlyThePast) {
  const auto spec = load_scenario(GetParam());
  if (!spec.saddle_laws) GTEST_SKIP() << "no saddle law registered";
  EXPECT_EQ(count_anticipations(spec, spec.saddle_laws->first, 100, 3), 0);
  EXPECT_EQ(count_anticipations(spec, spec.saddle_laws->second, 100, 4), 0);
}

INSTANTIATE_TEST_SUITE_P(Registry, EveryScenario,
                         ::testing::ValuesIn(scenario_names()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (char& c : n) {
                             if (c == '-') c = '_';
                           }
                           return n;
                         });

TEST(Registry, ReadingTheFutureThrows) {
  auto spec = load_scenario("barlow-control");
  spec.drift = [](double, const PathView& p, const Action&, const Action&) {
    return vec1(p.coord(p.step() + 1, 0));
  };
  EXPECT_EQ(code_of([&] { audit_scenario(spec, 10, 1); }),
            ErrorCode::kInvalidState);
}

TEST(Zeta, RangeAndHolderModulus) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> lh(-12.0, 0.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng);
    const double z = zeta(x);
    EXPECT_GE(z, 1.0);
    EXPECT_LE(z, 2.0);
    const double h = std::pow(10.0, lh(rng));
    EXPECT_LE(std::abs(zeta(x + h) - z), kZetaHolder * std::sqrt(h) + 1e-15);
    EXPECT_NEAR(zeta_bar(x), std::sqrt(z * z - 1.0), 1e-15);
  }
}

}  // namespace
}  // namespace gamelab
