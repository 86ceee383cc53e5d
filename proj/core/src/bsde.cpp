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

#include "gamelab/bsde.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gamelab/error.hpp"

namespace gamelab {

Driver zero_driver() {
  Driver d;
  d.fn = [](double, const PathView&, double, const Vec&) { return 0.0; };
  return d;
}

Driver linear_driver(const Vec& mu) {
  Driver d;
  d.fn = [mu](double, const PathView&, double, const Vec& z) {
    return mu.dot(z);
  };
  d.lipschitz_z = mu.norm();
  return d;
}

Driver hamiltonian_driver(const ScenarioSpec& spec, const ActionGrid& grid,
                          Side side) {
  Driver d;
  const int dim = spec.dim;
  d.fn = [spec, grid, side, dim](double t, const PathView& path, double y,
                                 const Vec& z) {
    HamiltonianQuery q;
    q.t = t;
    q.path = path;
    q.z = z;
    q.gamma = Mat::Zero(dim, dim);
    q.y = y;
    return side == Side::kUpper ? upper_H(spec, q, grid)
                                : lower_H(spec, q, grid);
  };
  d.lipschitz_z = spec.bounds.drift * std::sqrt(static_cast<double>(dim));
  return d;
}

ScenarioSpec driftless(const ScenarioSpec& spec) {
  ScenarioSpec s = spec;
  const int dim = spec.dim;
  s.drift = [dim](double, const PathView&, const Action&, const Action&) {
    return Vec(Vec::Zero(dim));
  };
  s.girsanov = nullptr;
  s.saddle_laws.reset();
  return s;
}

SimBatch simulate_reference(const ScenarioSpec& spec, const SimConfig& cfg) {
  const ScenarioSpec ref = driftless(spec);
  return simulate_feedback(ref, constant_control(spec.action0.discretize()[0]),
                           constant_control(spec.action1.discretize()[0]),
                           cfg);
}

Vec BsdeSolution::z_at(int path, int step) const {
  const double* p =
      z.data() + (static_cast<std::size_t>(path) * n_steps + step) * dim;
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out[i] = p[i];
  return out;
}

Vec BsdeSolution::predict_z(double t, const Vec& x) const {
  int k = static_cast<int>(std::floor(t / dt + 1e-9));
  k = std::clamp(k, 0, n_steps - 1);
  const Eigen::VectorXd v = z_models[k]->predict(x);
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out[i] = v[i];
  return out;
}

namespace {

Mat pseudo_inverse(const Mat& a) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-12);
  cod.compute(Eigen::MatrixXd(a));
  return cod.pseudoInverse();
}

}  // namespace

BsdeSolution solve_bsde(const ScenarioSpec& spec, const Driver& driver,
                        std::shared_ptr<const SimBatch> forward,
                        const BsdeOptions& options) {
  if (!forward) throw Error(ErrorCode::kInvalidArgument, "no forward batch");
  if (options.picard < 1) {
    throw Error(ErrorCode::kInvalidArgument, "picard iterations must be >= 1");
  }
  const SimBatch& fw = *forward;
  const int n = fw.n_steps();
  const int np = fw.n_paths();
  const int d = fw.dim();
  const double dt = fw.dt();
  if (driver.lipschitz_y * dt >= 1.0) {
    throw Error(ErrorCode::kContractionViolation,
                "lipschitz_y * dt = " + std::to_string(driver.lipschitz_y * dt) +
                    " >= 1");
  }

  BsdeSolution sol;
  sol.n_paths = np;
  sol.n_steps = n;
  sol.dim = d;
  sol.dt = dt;
  sol.forward = forward;
  sol.y.assign(static_cast<std::size_t>(np) * (n + 1), 0.0);
  sol.z.assign(static_cast<std::size_t>(np) * n * d, 0.0);
  sol.z_models.resize(n);
  sol.diagnostics.resize(n);
  const auto& grid = fw.grid();
  auto yref = [&](int i, int k) -> double& {
    return sol.y[static_cast<std::size_t>(i) * (n + 1) + k];
  };

  for (int i = 0; i < np; ++i) yref(i, n) = spec.terminal_cost(fw.path(i));

  RegressionModel::Samples x(np, d);
  Eigen::MatrixXd cont_target(np, 1);
  Eigen::MatrixXd z_target(np, d);
  std::vector<double> drive(np, 0.0);  // accumulated sum of dt * F per path
  for (int k = n - 1; k >= 0; --k) {
    const double t = grid[k];
    bool spread = false;
    for (int i = 0; i < np; ++i) {
      const Vec xk = fw.state(i, k);
      for (int j = 0; j < d; ++j) {
        x(i, j) = xk[j];
        if (xk[j] != x(0, j)) spread = true;
      }
      cont_target(i, 0) = yref(i, k + 1);
    }

    std::shared_ptr<const RegressionModel> cont_model;
    Eigen::MatrixXd cont;
    try {
      if (spread) {
        cont_model = std::make_shared<RegressionModel>(
            RegressionModel::fit(options.basis, x, cont_target));
      } else {
        cont_model = std::make_shared<RegressionModel>(
            RegressionModel::constant(cont_target.colwise().mean().transpose(),
                                      d));
      }
      cont = cont_model->predict_all(x);

      Mat a_prev;
      Mat pinv;
      for (int i = 0; i < np; ++i) {
        const Mat s = spec.vol(t, fw.path(i, k), fw.action0(i, k),
                               fw.action1(i, k));
        const Mat a = s * s.transpose() * dt;
        if (a_prev.size() == 0 || a != a_prev) {
          pinv = pseudo_inverse(a);
          a_prev = a;
        }
        const Vec dx = fw.state(i, k + 1) - fw.state(i, k);
        const Vec m = (yref(i, k + 1) - cont(i, 0)) * dx;
        const Vec zi = pinv * m;
        for (int j = 0; j < d; ++j) z_target(i, j) = zi[j];
      }
      std::shared_ptr<const RegressionModel> z_model;
      if (spread) {
        z_model = std::make_shared<RegressionModel>(
            RegressionModel::fit(options.basis, x, z_target));
      } else {
        z_model = std::make_shared<RegressionModel>(RegressionModel::constant(
            z_target.colwise().mean().transpose(), d));
      }
      sol.z_models[k] = z_model;
      sol.diagnostics[k] = z_model->diagnostics();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kRegressionDegenerate) {
        throw Error(ErrorCode::kRegressionDegenerate,
                    "step " + std::to_string(k) + ": " + e.what(), k);
      }
      throw;
    }

    const Eigen::MatrixXd zhat = sol.z_models[k]->predict_all(x);
    for (int i = 0; i < np; ++i) {
      Vec zi(d);
      for (int j = 0; j < d; ++j) {
        zi[j] = zhat(i, j);
        sol.z[(static_cast<std::size_t>(i) * n + k) * d + j] = zi[j];
      }
      const PathView p = fw.path(i, k);
      double y = cont(i, 0);
      double f = 0.0;
      for (int it = 0; it < options.picard; ++it) {
        f = driver.fn(t, p, y, zi);
        y = cont(i, 0) + dt * f;
      }
      yref(i, k) = y;
      drive[i] += dt * f;
    }
  }

  std::vector<double> pathwise(np);
  for (int i = 0; i < np; ++i) pathwise[i] = yref(i, n) + drive[i];
  sol.y0 = summarize(pathwise, fw.antithetic());
  double mean0 = 0.0;
  for (int i = 0; i < np; ++i) mean0 += yref(i, 0);
  sol.y0.mean = mean0 / np;
  sol.z0 = sol.z_at(0, 0);
  return sol;
}

ZError z_accuracy(const BsdeSolution& sol,
                  const std::function<Vec(double t, const Vec& x)>& formula) {
  ZError e;
  double ss = 0.0;
  const SimBatch& fw = *sol.forward;
  const auto& grid = fw.grid();
  for (int k = 0; k < sol.n_steps - 2; ++k) {
    for (int i = 0; i < sol.n_paths; ++i) {
      const Vec diff = sol.z_at(i, k) - formula(grid[k], fw.state(i, k));
      ss += diff.squaredNorm();
      ++e.count;
    }
  }
  e.rms = e.count > 0 ? std::sqrt(ss / e.count) : 0.0;
  return e;
}

SaddleMap hamiltonian_saddle_map(const ScenarioSpec& spec,
                                 const ActionGrid& grid) {
  return [spec, grid](const Vec& z) {
    const PointPath origin(0.0, Vec::Zero(spec.dim));
    const HamiltonianQuery q =
        make_query(origin, 0.0, z, Mat::Zero(spec.dim, spec.dim));
    const SaddleReport r = saddle_point(spec, q, grid);
    return std::make_pair(r.a0, r.a1);
  };
}

std::pair<ControlLaw, ControlLaw> extract_saddle_controls(
    std::shared_ptr<const BsdeSolution> sol, const SaddleMap& saddle_map) {
  // The simulators evaluate both laws on the same (t, x) in turn; the
  // pair only depends on (t, x), so the second call reuses it.
  struct Cache {
    double t = -1.0;
    Vec x;
    std::pair<Action, Action> pair;
  };
  auto cache = std::make_shared<Cache>();
  auto pick = [sol, saddle_map, cache](int which) {
    return [sol, saddle_map, cache, which](int, const PathView& path) {
      const double t = path.time();
      const Vec x = path.current();
      if (cache->t != t || cache->x.size() != x.size() || cache->x != x) {
        cache->pair = saddle_map(sol->predict_z(t, x));
        cache->t = t;
        cache->x = x;
      }
      return which == 0 ? cache->pair.first : cache->pair.second;
    };
  };
  return {ControlLaw(pick(0), "bsde-saddle-0"),
          ControlLaw(pick(1), "bsde-saddle-1")};
}

SaddleCheck verify_saddle(const ScenarioSpec& spec,
                          const std::pair<ControlLaw, ControlLaw>& candidate,
                          const std::vector<ControlLaw>& deviations0,
                          const std::vector<ControlLaw>& deviations1,
                          const SimConfig& cfg, double sigmas) {
  SaddleCheck check;
  check.sigmas = sigmas;
  check.candidate = estimate_cost(
      spec, simulate_feedback(spec, candidate.first, candidate.second, cfg));
  const double j = check.candidate.mean;
  const double se = check.candidate.std_error;
  check.passed = true;
  auto record = [&](int player, const ControlLaw& law, const CostEstimate& c) {
    DeviationResult r;
    r.player = player;
    r.description = law.description();
    r.cost = c;
    r.pooled_std_error = std::hypot(se, c.std_error);
    // Player 0 minimizes: deviating must not lower the cost, and player 1
    // deviating must not raise it.
    r.slack = player == 0 ? c.mean - j + sigmas * r.pooled_std_error
                          : j - c.mean + sigmas * r.pooled_std_error;
    r.holds = r.slack >= 0.0;
    check.passed = check.passed && r.holds;
    check.deviations.push_back(r);
  };
  for (const auto& law : deviations0) {
    record(0, law,
           estimate_cost(spec,
                         simulate_feedback(spec, law, candidate.second, cfg)));
  }
  for (const auto& law : deviations1) {
    record(1, law,
           estimate_cost(spec,
                         simulate_feedback(spec, candidate.first, law, cfg)));
  }
  return check;
}

std::vector<ControlLaw> standard_deviations(const ActionSet& set,
                                            const ControlLaw& candidate) {
  std::vector<ControlLaw> out;
  std::vector<Action> extremes;
  Action centre;
  if (set.is_box()) {
    const int dim = set.dimension();
    for (int mask = 0; mask < (1 << dim); ++mask) {
      Action a(dim);
      for (int i = 0; i < dim; ++i) {
        a[i] = (mask >> i) & 1 ? set.upper()[i] : set.lower()[i];
      }
      extremes.push_back(a);
    }
    centre = 0.5 * (set.lower() + set.upper());
  } else {
    extremes = set.discretize();
  }
  for (const auto& a : extremes) out.push_back(constant_control(a));
  if (set.is_box()) out.push_back(constant_control(centre));

  const Action lo = extremes.front();
  const Action hi = extremes.back();
  out.emplace_back(
      [lo, hi](int step, const PathView&) { return step % 2 == 0 ? lo : hi; },
      "alternating");
  // Pseudo-random flip keyed on the step and the current state bits.
  out.emplace_back(
      [lo, hi](int step, const PathView& path) {
        std::uint64_t h = static_cast<std::uint64_t>(step);
        const Vec x = path.current();
        for (int i = 0; i < x.size(); ++i) {
          std::uint64_t bits;
          const double v = x[i];
          std::memcpy(&bits, &v, sizeof bits);
          h = splitmix64(h ^ bits);
        }
        return (splitmix64(h) & 1) ? hi : lo;
      },
      "random-flip");
  if (set.is_box()) {
    const Vec sum = set.lower() + set.upper();
    out.emplace_back(
        [candidate, sum](int step, const PathView& path) {
          return Action(sum - candidate(step, path));
        },
        "reflected(" + candidate.description() + ")");
  }
  return out;
}

}  // namespace gamelab
