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
#include "gamelab/registry.hpp"
#include "gamelab/sde.hpp"
#include "gamelab/zeta.hpp"
#include "oracles.hpp"

namespace gamelab {
namespace {

const ControlLaw kNone = constant_control(vec1(0.0));

SimConfig config(int paths, int steps, std::uint64_t seed,
                 bool antithetic = false) {
  SimConfig c;
  c.n_paths = paths;
  c.n_steps = steps;
  c.seed = seed;
  c.antithetic = antithetic;
  return c;
}

ScenarioSpec scaled_bm(double c, double T) {
  Mat s(1, 1);
  s << c;
  return oracle::constant_spec(vec1(0.0), s, 0.0,
                               [](const Vec& x) { return x[0] * x[0]; }, T);
}

TEST(Simulate, ZeroDynamicsStayAtZero) {
  const auto spec = oracle::constant_spec(
      Vec::Zero(2), Mat::Zero(2, 2), 0.0, [](const Vec&) { return 0.0; });
  for (bool strong : {false, true}) {
    const auto b = strong ? simulate_strong(spec, kNone, kNone, config(50, 8, 1))
                          : simulate_feedback(spec, kNone, kNone, config(50, 8, 1));
    for (int i = 0; i < b.n_paths(); ++i) {
      for (int k = 0; k <= b.n_steps(); ++k) {
        EXPECT_EQ(b.state(i, k), Vec::Zero(2));
      }
      EXPECT_NO_THROW(b.sample_path(i).validate());
    }
  }
}

TEST(Simulate, ScaledBrownianVariance) {
  const double c = 1.7, T = 2.0;
  const auto spec = scaled_bm(c, T);
  const auto b = simulate_feedback(spec, kNone, kNone, config(100000, 4, 3));
  const CostEstimate e = estimate_cost(spec, b);
  EXPECT_NEAR(e.mean, c * c * T, 3.0 * e.std_error);
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_EQ(e.n, 100000);
}

TEST(Simulate, ConstantPayoffHasNoError) {
  const auto spec = oracle::constant_spec(vec1(0.0), Mat::Identity(1, 1), 0.0,
                                          [](const Vec&) { return 1.0; });
  const auto e = estimate_cost(
      spec, simulate_feedback(spec, kNone, kNone, config(1000, 4, 1)));
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(Simulate, SeedDeterminism) {
  const auto spec = load_scenario("weak-drift-game");
  const auto& laws = *spec.saddle_laws;
  const auto a = simulate_feedback(spec, laws.first, laws.second, config(200, 16, 9));
  const auto b = simulate_feedback(spec, laws.first, laws.second, config(200, 16, 9));
  const auto c = simulate_feedback(spec, laws.first, laws.second, config(200, 16, 10));
  bool differs = false;
  for (int i = 0; i < 200; ++i) {
    for (int k = 0; k <= 16; ++k) {
      ASSERT_EQ(a.state(i, k), b.state(i, k));
      differs |= a.state(i, k) != c.state(i, k);
    }
  }
  EXPECT_TRUE(differs);
}

TEST(Simulate, PathStreamsIndependentOfBatchSize) {
  const auto spec = scaled_bm(1.0, 1.0);
  const auto small = simulate_feedback(spec, kNone, kNone, config(10, 8, 4));
  const auto big = simulate_feedback(spec, kNone, kNone, config(100, 8, 4));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(small.state(i, 8), big.state(i, 8));
}

TEST(Simulate, RecordedActionsStayInSets) {
  const auto spec = load_scenario("barlow-game");
  const auto& laws = *spec.saddle_laws;
  const auto b = simulate_feedback(spec, laws.first, laws.second, config(100, 16, 2));
  for (int i = 0; i < 100; ++i) {
    for (int k = 0; k < 16; ++k) {
      EXPECT_TRUE(spec.action0.contains(b.action0(i, k)));
      EXPECT_TRUE(spec.action1.contains(b.action1(i, k)));
      EXPECT_DOUBLE_EQ(b.action0(i, k)[0], zeta_bar(b.state(i, k)[0]));
    }
  }
}

TEST(Simulate, LawOutsideActionSet) {
  const auto spec = load_scenario("barlow-game");
  try {
    simulate_feedback(spec, constant_control(vec1(5.0)),
                      constant_control(vec1(0.0)), config(4, 4, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainViolation);
  }
}

TEST(Simulate, BlowupNamesTheStep) {
  auto spec = scaled_bm(1.0, 1.0);
  spec.drift = [](double t, const PathView&, const Action&, const Action&) {
    return vec1(t > 0.4 ? INFINITY : 0.0);
  };
  try {
    simulate_feedback(spec, kNone, kNone, config(4, 10, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumericalBlowup);
    ASSERT_TRUE(e.detail().has_value());
    // The drift first blows up on [0.5, 0.6), so X at step 6 is the first
    // non-finite state.
    EXPECT_EQ(*e.detail(), 6);
  }
}

TEST(Simulate, BadConfig) {
  const auto spec = scaled_bm(1.0, 1.0);
  EXPECT_THROW(simulate_feedback(spec, kNone, kNone, config(0, 4, 1)), Error);
  EXPECT_THROW(simulate_feedback(spec, kNone, kNone, config(4, 0, 1)), Error);
}

// Martingale residual and quadratic variation under the saddle laws.
TEST(Simulate, MartingaleAndQuadraticVariation) {
  for (const char* name : {"weak-drift-game", "barlow-game", "weak-degenerate"}) {
    const auto spec = load_scenario(name);
    const auto& laws = *spec.saddle_laws;
    const int n = 20000, steps = 16;
    const auto b = simulate_feedback(spec, laws.first, laws.second,
                                     config(n, steps, 12));
    const int d = spec.dim;
    for (int i = 0; i < d; ++i) {
      std::vector<double> resid(n), excess(n);
      for (int p = 0; p < n; ++p) {
        double m = b.state(p, steps)[i], qv = 0.0, expect = 0.0;
        for (int k = 0; k < steps; ++k) {
          const PathView v = b.path(p, k);
          const Vec drift = spec.drift(b.grid()[k], v, b.action0(p, k), b.action1(p, k));
          const Mat sig = spec.vol(b.grid()[k], v, b.action0(p, k), b.action1(p, k));
          const double dm = b.state(p, k + 1)[i] - b.state(p, k)[i] - drift[i] * b.dt();
          m -= drift[i] * b.dt();
          qv += dm * dm;
          expect += (sig * sig.transpose())(i, i) * b.dt();
        }
        resid[p] = m;
        excess[p] = qv - expect;
      }
      EXPECT_LE(std::abs(oracle::mean(resid)), 3.0 * oracle::std_error(resid)) << name;
      EXPECT_LE(std::abs(oracle::mean(excess)), 3.0 * oracle::std_error(excess)) << name;
    }
  }
}

TEST(Simulate, AntitheticHalvesLinearPayoffVariance) {
  // xi = X_T . v for fixed v: each antithetic pair averages to exactly 0.
  const Vec v = vec2(0.6, -1.3);
  const auto spec = oracle::constant_spec(
      Vec::Zero(2), Mat::Identity(2, 2), 0.0,
      [v](const Vec& x) { return x.dot(v); });
  const auto plain = estimate_cost(
      spec, simulate_feedback(spec, kNone, kNone, config(4000, 8, 5)));
  const auto b = simulate_feedback(spec, kNone, kNone, config(4000, 8, 5, true));
  ASSERT_TRUE(b.antithetic());
  for (int p = 0; p < 4000; p += 2) {
    EXPECT_NEAR(b.state(p, 8)[0], -b.state(p + 1, 8)[0], 1e-12);
  }
  const auto costs = path_costs(spec, b);
  const CostEstimate anti = summarize(costs, true);
  EXPECT_LE(anti.std_error, 0.5 * plain.std_error);
  EXPECT_LT(anti.std_error, 1e-12);
}

TEST(Summarize, MeanAndError) {
  const std::vector<double> x = {1.0, 2.0, 3.0, 6.0};
  const auto e = summarize(x);
  EXPECT_DOUBLE_EQ(e.mean, 3.0);
  EXPECT_NEAR(e.std_error, oracle::std_error(x), 1e-15);
  EXPECT_EQ(e.n, 4);
  const auto a = summarize(x, true);
  EXPECT_DOUBLE_EQ(a.mean, 3.0);
  EXPECT_EQ(a.n, 4);
  // Pair means 1.5 and 4.5.
  EXPECT_NEAR(a.std_error, 1.5, 1e-15);
}

TEST(Strong, CopycatAndResponderBounds) {
  const auto spec = load_scenario("strong-gap", {{"T", 4}, {"c", 1}, {"rho", 0}});
  // Copycat: both players play the same constant, so the drifts cancel.
  const auto copy = estimate_cost(
      spec, simulate_strong(spec, constant_control(vec1(1.0)),
                            constant_control(vec1(1.0)), config(40000, 8, 6)));
  EXPECT_NEAR(copy.mean, 8.0, 3.0 * copy.std_error);
  // Player 0 at +1 (x0 = T > 0); responder plays -1.
  const auto resp = estimate_cost(
      spec, simulate_strong(spec, constant_control(vec1(1.0)), sign_responder(4.0),
                            config(40000, 8, 7)));
  EXPECT_GE(resp.mean, 16.0 - 3.0 * resp.std_error);
}

TEST(Strong, ControlsReadTheNoise) {
  // A law reading the current path coordinate sees W, not X.
  const auto spec = load_scenario("weak-drift-game");
  const ControlLaw follow(
      [](int, const PathView& p) { return vec1(p.current()[0] >= 0 ? 1.0 : -1.0); },
      "sgn(path_1)");
  const auto b = simulate_strong(spec, follow, kNone, config(50, 8, 3));
  for (int p = 0; p < 50; ++p) {
    for (int k = 0; k < 8; ++k) {
      EXPECT_EQ(b.action0(p, k)[0], b.noise(p, k).current()[0] >= 0 ? 1.0 : -1.0);
    }
  }
}

TEST(Girsanov, ZeroLambdaGivesUnitWeights) {
  auto spec = load_scenario("weak-drift-game");
  spec = with_girsanov(spec, [](double, const PathView&, const Action&,
                                const Action&) { return Vec(Vec::Zero(2)); });
  const auto& laws = *spec.saddle_laws;
  auto b = girsanov_weights(
      spec, simulate_feedback(girsanov_reduced(spec), laws.first, laws.second,
                              config(500, 8, 1)));
  for (int p = 0; p < 500; ++p) EXPECT_EQ(b.weight(p), 1.0);
}

TEST(Girsanov, WeightsAverageToOne) {
  const auto spec = load_scenario("weak-drift-game");
  const auto& laws = *spec.saddle_laws;
  const auto b = girsanov_weights(
      spec, simulate_feedback(girsanov_reduced(spec), laws.first, laws.second,
                              config(100000, 16, 2)));
  std::vector<double> w(b.n_paths());
  for (int p = 0; p < b.n_paths(); ++p) {
    w[p] = b.weight(p);
    ASSERT_GT(w[p], 0.0);
  }
  EXPECT_NEAR(oracle::mean(w), 1.0, 3.0 * oracle::std_error(w));
}

TEST(Girsanov, MissingLambda) {
  const auto spec = load_scenario("barlow-game");
  try {
    girsanov_reduced(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidState);
  }
}

TEST(Estimate, SaddleLawCosts) {
  const auto wdg = load_scenario("weak-drift-game");
  const auto e = estimate_cost(
      wdg, simulate_feedback(wdg, wdg.saddle_laws->first, wdg.saddle_laws->second,
                             config(20000, 64, 8)));
  // Euler bias of the sign feedback is O(dt); allow 3 se plus 4 dt.
  EXPECT_NEAR(e.mean, 2.0, 3.0 * e.std_error + 4.0 / 64);

  const auto bg = load_scenario("barlow-game");
  const auto f = estimate_cost(
      bg, simulate_feedback(bg, bg.saddle_laws->first, bg.saddle_laws->second,
                            config(20000, 64, 9)));
  EXPECT_NEAR(f.mean, 1.0, 3.0 * f.std_error);
}

TEST(Estimate, BarlowWeakStepHalving) {
  const auto spec = load_scenario("barlow-weak");
  const auto& laws = *spec.saddle_laws;
  auto second_moment = [&](int steps) {
    const auto b = simulate_feedback(spec, laws.first, laws.second,
                                     config(20000, steps, 21));
    std::vector<double> x2(b.n_paths());
    for (int p = 0; p < b.n_paths(); ++p) {
      const double x = b.state(p, steps)[0];
      x2[p] = x * x;
    }
    return std::make_pair(oracle::mean(x2), oracle::std_error(x2));
  };
  const auto [m1, s1] = second_moment(32);
  const auto [m2, s2] = second_moment(64);
  EXPECT_LE(std::abs(m1 - m2), 3.0 * std::hypot(s1, s2));
}

}  // namespace
}  // namespace gamelab
