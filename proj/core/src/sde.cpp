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

#include "gamelab/sde.hpp"

#include <cmath>

#include "gamelab/error.hpp"

namespace gamelab {

const char* to_string(Scheme scheme) {
  return scheme == Scheme::kFeedbackOnState ? "feedback-on-X" : "noise-adapted";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  return splitmix64(seed ^ splitmix64(key + 0x632be59bd9b4e019ULL));
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(seed, h);
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index)
    : engine_(derive_seed(seed, path_index)) {}

SimBatch::SimBatch(const ScenarioSpec& spec, const SimConfig& cfg,
                   Scheme scheme)
    : n_paths_(cfg.n_paths),
      n_steps_(cfg.n_steps),
      dim_(spec.dim),
      adim0_(spec.action0.dimension()),
      adim1_(spec.action1.dimension()),
      dt_(spec.horizon / cfg.n_steps),
      scheme_(scheme),
      antithetic_(cfg.antithetic) {
  if (cfg.n_paths < 1 || cfg.n_steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need n_paths, n_steps >= 1");
  }
  if (cfg.antithetic && cfg.n_paths % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "antithetic sampling needs an even path count");
  }
  grid_ = uniform_grid(spec.horizon, n_steps_);
  const std::size_t rows = static_cast<std::size_t>(n_paths_) * (n_steps_ + 1);
  states_.assign(rows * dim_, 0.0);
  brownian_.assign(rows * dim_, 0.0);
  actions0_.assign(static_cast<std::size_t>(n_paths_) * n_steps_ * adim0_, 0.0);
  actions1_.assign(static_cast<std::size_t>(n_paths_) * n_steps_ * adim1_, 0.0);
  weights_.assign(n_paths_, 1.0);
}

double* SimBatch::states_row(int i, int k) {
  return states_.data() +
         (static_cast<std::size_t>(i) * (n_steps_ + 1) + k) * dim_;
}

double* SimBatch::brownian_row(int i, int k) {
  return brownian_.data() +
         (static_cast<std::size_t>(i) * (n_steps_ + 1) + k) * dim_;
}

double* SimBatch::action0_row(int i, int k) {
  return actions0_.data() +
         (static_cast<std::size_t>(i) * n_steps_ + k) * adim0_;
}

double* SimBatch::action1_row(int i, int k) {
  return actions1_.data() +
         (static_cast<std::size_t>(i) * n_steps_ + k) * adim1_;
}

PathView SimBatch::path(int i, int step) const {
  return PathView(grid_.data(),
                  states_.data() +
                      static_cast<std::size_t>(i) * (n_steps_ + 1) * dim_,
                  dim_, step);
}

PathView SimBatch::noise(int i, int step) const {
  return PathView(grid_.data(),
                  brownian_.data() +
                      static_cast<std::size_t>(i) * (n_steps_ + 1) * dim_,
                  dim_, step);
}

Vec SimBatch::state(int i, int k) const { return path(i, k).current(); }

Vec SimBatch::brownian_increment(int i, int k) const {
  const PathView w = noise(i, k + 1);
  return w.state(k + 1) - w.state(k);
}

Action SimBatch::action0(int i, int k) const {
  const double* p = actions0_.data() +
                    (static_cast<std::size_t>(i) * n_steps_ + k) * adim0_;
  return Eigen::Map<const Vec>(p, adim0_);
}

Action SimBatch::action1(int i, int k) const {
  const double* p = actions1_.data() +
                    (static_cast<std::size_t>(i) * n_steps_ + k) * adim1_;
  return Eigen::Map<const Vec>(p, adim1_);
}

SamplePath SimBatch::sample_path(int i) const {
  SamplePath s;
  s.grid = grid_;
  s.dim = dim_;
  const std::size_t len = static_cast<std::size_t>(n_steps_ + 1) * dim_;
  const std::size_t off = static_cast<std::size_t>(i) * len;
  s.states.assign(states_.begin() + off, states_.begin() + off + len);
  s.brownian.assign(brownian_.begin() + off, brownian_.begin() + off + len);
  s.weight = weights_[i];
  return s;
}

namespace {

SimBatch simulate(const ScenarioSpec& spec, const ControlLaw& law0,
                  const ControlLaw& law1, const SimConfig& cfg,
                  Scheme scheme) {
  SimBatch batch(spec, cfg, scheme);
  const int d = spec.dim;
  const int n = cfg.n_steps;
  const double dt = batch.dt();
  const double sqdt = std::sqrt(dt);
  const auto& grid = batch.grid();
  Vec dw(d);
  for (int i = 0; i < cfg.n_paths; ++i) {
    const bool mirrored = cfg.antithetic && (i % 2 == 1);
    PathRng rng(cfg.seed, cfg.antithetic ? i / 2 : i);
    for (int k = 0; k < n; ++k) {
      const PathView xs = batch.path(i, k);
      const PathView view =
          scheme == Scheme::kFeedbackOnState ? xs : batch.noise(i, k);
      const Action a0 = law0(k, view);
      const Action a1 = law1(k, view);
      if (!spec.action0.contains(a0) || !spec.action1.contains(a1)) {
        throw Error(ErrorCode::kDomainViolation,
                    "control law left its action set", k);
      }
      std::copy(a0.data(), a0.data() + a0.size(), batch.action0_row(i, k));
      std::copy(a1.data(), a1.data() + a1.size(), batch.action1_row(i, k));

      const double t = grid[k];
      const Vec b = spec.drift(t, xs, a0, a1);
      const Mat s = spec.vol(t, xs, a0, a1);
      for (int j = 0; j < d; ++j) {
        const double z = rng.normal();
        dw[j] = (mirrored ? -z : z) * sqdt;
      }
      const Vec step = b * dt + s * dw;
      const double* x = batch.states_row(i, k);
      double* next = batch.states_row(i, k + 1);
      const double* w = batch.brownian_row(i, k);
      double* wnext = batch.brownian_row(i, k + 1);
      for (int j = 0; j < d; ++j) {
        next[j] = x[j] + step[j];
        wnext[j] = w[j] + dw[j];
        if (!std::isfinite(next[j])) {
          throw Error(ErrorCode::kNumericalBlowup,
                      "non-finite state at step " + std::to_string(k + 1),
                      k + 1);
        }
      }
    }
  }
  return batch;
}

}  // namespace

SimBatch simulate_feedback(const ScenarioSpec& spec, const ControlLaw& law0,
                           const ControlLaw& law1, const SimConfig& cfg) {
  return simulate(spec, law0, law1, cfg, Scheme::kFeedbackOnState);
}

SimBatch simulate_strong(const ScenarioSpec& spec, const ControlLaw& law0,
                         const ControlLaw& law1, const SimConfig& cfg) {
  return simulate(spec, law0, law1, cfg, Scheme::kNoiseAdapted);
}

SimBatch girsanov_weights(const ScenarioSpec& spec, SimBatch batch) {
  if (!spec.girsanov) {
    throw Error(ErrorCode::kInvalidState,
                "scenario " + spec.name + " declares no lambda");
  }
  const double dt = batch.dt();
  const auto& grid = batch.grid();
  auto& w = batch.weights();
  for (int i = 0; i < batch.n_paths(); ++i) {
    double log_w = 0.0;
    for (int k = 0; k < batch.n_steps(); ++k) {
      const Vec lam = spec.girsanov(grid[k], batch.path(i, k),
                                    batch.action0(i, k), batch.action1(i, k));
      log_w += lam.dot(batch.brownian_increment(i, k)) -
               0.5 * lam.squaredNorm() * dt;
    }
    w[i] *= std::exp(log_w);
  }
  return batch;
}

CostEstimate summarize(std::span<const double> samples, bool antithetic) {
  CostEstimate est;
  est.n = static_cast<long>(samples.size());
  if (samples.empty()) return est;
  std::vector<double> v;
  if (antithetic) {
    for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
      v.push_back(0.5 * (samples[i] + samples[i + 1]));
    }
  } else {
    v.assign(samples.begin(), samples.end());
  }
  const double m = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= m;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  est.mean = mean;
  est.std_error = v.size() > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
  return est;
}

std::vector<double> path_costs(const ScenarioSpec& spec,
                               const SimBatch& batch) {
  std::vector<double> costs(batch.n_paths());
  const auto& grid = batch.grid();
  const double dt = batch.dt();
  for (int i = 0; i < batch.n_paths(); ++i) {
    double running = 0.0;
    for (int k = 0; k < batch.n_steps(); ++k) {
      running += spec.eval_cost(grid[k], batch.path(i, k),
                                batch.action0(i, k), batch.action1(i, k));
    }
    costs[i] = spec.terminal_cost(batch.path(i)) + running * dt;
  }
  return costs;
}

CostEstimate estimate_cost(const ScenarioSpec& spec, const SimBatch& batch) {
  auto costs = path_costs(spec, batch);
  for (int i = 0; i < batch.n_paths(); ++i) costs[i] *= batch.weight(i);
  return summarize(costs, batch.antithetic());
}

}  // namespace gamelab
