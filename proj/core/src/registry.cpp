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

#include "gamelab/registry.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gamelab/error.hpp"
#include "gamelab/zeta.hpp"

namespace gamelab {
namespace {

using Params = std::map<std::string, double>;
using Builder = std::function<ScenarioSpec(const Params&)>;

const std::set<std::string> kGridKeys = {"n_time", "n_space", "n_action0",
                                         "n_action1", "box"};

// Symmetric square root c * sqrt([[1, rho], [rho, 1]]).
Mat correlated_vol(double c, double rho) {
  const double p = std::sqrt(1.0 + rho);
  const double m = std::sqrt(std::max(0.0, 1.0 - rho));
  Mat s(2, 2);
  s << 0.5 * (p + m), 0.5 * (p - m), 0.5 * (p - m), 0.5 * (p + m);
  return c * s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double last_delta(const PathView& p) {
  return p.coord(p.step(), 0) - p.coord(p.step(), 1);
}

// b = (a0, a1), sigma = c sqrt(R), xi = |x1 - x2|^2.
ScenarioSpec tracking_game(const Params& prm) {
  const double T = prm.at("T");
  const double c = prm.at("c");
  const double rho = prm.at("rho");
  if (!(T > 0.0) || c < 0.0 || rho < -1.0 || rho > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "need T > 0, c >= 0, |rho| <= 1");
  }
  const Mat sig = correlated_vol(c, rho);
  ScenarioSpec s;
  s.dim = 2;
  s.horizon = T;
  s.drift = [](double, const PathView&, const Action& a0, const Action& a1) {
    return vec2(a0[0], a1[0]);
  };
  s.vol = [sig](double, const PathView&, const Action&, const Action&) {
    return sig;
  };
  s.running_cost = [](double, const PathView&, double, const Vec&,
                      const Action&, const Action&) { return 0.0; };
  s.terminal_cost = [](const PathView& p) {
    const double d = last_delta(p);
    return d * d;
  };
  if (c > 0.0 && rho < 1.0) {
    const Mat inv = sig.inverse();
    s.girsanov = [inv](double, const PathView&, const Action& a0,
                       const Action& a1) -> Vec {
      return inv * vec2(a0[0], a1[0]);
    };
  }
  s.action0 = ActionSet::interval(-1.0, 1.0);
  s.action1 = ActionSet::interval(-1.0, 1.0);
  s.bounds = {1.0, sig.cwiseAbs().maxCoeff(), 0.0};
  s.params = prm;
  return s;
}

ScenarioSpec strong_gap(const Params& prm) {
  ScenarioSpec s = tracking_game(prm);
  s.name = "strong-gap";
  s.description = "tracking game whose strong formulation has no value";
  return s;
}

ScenarioSpec weak_drift_game(const Params& prm) {
  ScenarioSpec s = tracking_game(prm);
  s.name = "weak-drift-game";
  s.description = "tracking game in weak formulation, value 2 c^2 (1-rho) T";
  const double T = s.horizon;
  const double q = 2.0 * prm.at("c") * prm.at("c") * (1.0 - prm.at("rho"));
  s.closed_form = [T, q](double t, const Vec& x) {
    const double d = x[0] - x[1];
    return d * d + q * (T - t);
  };
  s.saddle_laws = std::make_pair(
      ControlLaw(
          [](int, const PathView& p) { return vec1(-sgn(last_delta(p))); },
          "-sgn(x1-x2)"),
      ControlLaw(
          [](int, const PathView& p) { return vec1(sgn(-last_delta(p))); },
          "sgn(x2-x1)"));
  s.box_half_width = 3.0;
  return s;
}

ScenarioSpec weak_degenerate(const Params& prm) {
  ScenarioSpec s = weak_drift_game(prm);
  s.name = "weak-degenerate";
  s.description = "tracking game with perfectly correlated noise";
  // On the diagonal every pair with a0 = a1 keeps x1 = x2; both play 0.
  s.saddle_laws = std::make_pair(
      ControlLaw(
          [](int, const PathView& p) {
            const double d = last_delta(p);
            return vec1(d == 0.0 ? 0.0 : -sgn(d));
          },
          "-sgn(x1-x2), 0 on the diagonal"),
      ControlLaw(
          [](int, const PathView& p) {
            const double d = last_delta(p);
            return vec1(d == 0.0 ? 0.0 : sgn(-d));
          },
          "sgn(x2-x1), 0 on the diagonal"));
  s.box_half_width = 1.0;
  return s;
}

double current_x(const PathView& p) { return p.coord(p.step(), 0); }

ScenarioSpec barlow_control(const Params& prm) {
  const double T = prm.at("T");
  ScenarioSpec s;
  s.name = "barlow-control";
  s.description = "control problem with Hoelder volatility target zeta";
  s.dim = 1;
  s.horizon = T;
  s.drift = [](double, const PathView&, const Action&, const Action&) {
    return vec1(0.0);
  };
  s.vol = [](double, const PathView&, const Action& a0, const Action&) {
    Mat m(1, 1);
    m << std::abs(a0[0]);
    return m;
  };
  s.running_cost = [](double, const PathView& p, double, const Vec&,
                      const Action& a0, const Action&) {
    const double z = zeta(current_x(p));
    return z * z - 2.0 * a0[0] * z;
  };
  s.terminal_cost = [](const PathView& p) {
    const double x = current_x(p);
    return x * x;
  };
  s.action0 = ActionSet::interval(1.0, 2.0);
  s.action1 = ActionSet::interval(0.0, 0.0, 1);
  s.bounds = {0.0, 2.0, 4.0};
  s.params = prm;
  s.closed_form = [](double, const Vec& x) { return x[0] * x[0]; };
  s.saddle_laws = std::make_pair(
      ControlLaw([](int, const PathView& p) { return vec1(zeta(current_x(p))); },
                 "zeta(x)"),
      constant_control(vec1(0.0)));
  s.box_half_width = 2.0;
  return s;
}

ScenarioSpec barlow_game(const Params& prm) {
  const double T = prm.at("T");
  ScenarioSpec s;
  s.name = "barlow-game";
  s.description = "game with volatility |a| and Hoelder target zeta_bar";
  s.dim = 1;
  s.horizon = T;
  s.drift = [](double, const PathView&, const Action&, const Action&) {
    return vec1(0.0);
  };
  s.vol = [](double, const PathView&, const Action& a0, const Action& a1) {
    Mat m(1, 1);
    m << std::hypot(a0[0], a1[0]);
    return m;
  };
  s.running_cost = [](double, const PathView& p, double, const Vec&,
                      const Action& a0, const Action&) {
    const double z = zeta_bar(current_x(p));
    return z * z - 2.0 * a0[0] * z;
  };
  s.terminal_cost = [](const PathView& p) {
    const double x = current_x(p);
    return x * x;
  };
  s.action0 = ActionSet::interval(1.0, 2.0);
  s.action1 = ActionSet::interval(0.0, 1.0);
  s.bounds = {0.0, std::sqrt(5.0), 4.0};
  s.params = prm;
  s.closed_form = [T](double t, const Vec& x) {
    return x[0] * x[0] + T - t;
  };
  s.saddle_laws = std::make_pair(
      ControlLaw(
          [](int, const PathView& p) { return vec1(zeta_bar(current_x(p))); },
          "zeta_bar(x)"),
      constant_control(vec1(1.0)));
  s.box_half_width = 2.0;
  return s;
}

ScenarioSpec barlow_weak(const Params& prm) {
  ScenarioSpec s = barlow_game(prm);
  s.name = "barlow-weak";
  s.description = "Hoelder volatility game in weak formulation";
  return s;
}

ScenarioSpec state_indep_range(const Params& prm) {
  const double T = prm.at("T");
  ScenarioSpec s;
  s.name = "state-indep-range";
  s.description = "path-dependent volatility with state independent range";
  s.dim = 1;
  s.horizon = T;
  s.drift = [](double, const PathView&, const Action&, const Action&) {
    return vec1(0.0);
  };
  s.vol = [](double, const PathView& p, const Action& a0, const Action& a1) {
    double running_max = p.coord(0, 0);
    for (int k = 1; k <= p.step(); ++k) {
      running_max = std::max(running_max, p.coord(k, 0));
    }
    const double eta = std::tanh(running_max);
    const double lo = normal_cdf(a0[0]) + normal_cdf(a1[0]);
    const double hi = normal_cdf(a0[0] + 1.0) + normal_cdf(a1[0] + 1.0);
    Mat m(1, 1);
    m << std::max(lo, std::min(eta + a0[0] + a1[0], hi));
    return m;
  };
  s.running_cost = [](double, const PathView&, double, const Vec&,
                      const Action&, const Action&) { return 0.0; };
  s.terminal_cost = [](const PathView& p) {
    const double x = current_x(p);
    return x * x;
  };
  s.action0 = ActionSet::interval(-8.0, 8.0);
  s.action1 = ActionSet::interval(-8.0, 8.0);
  s.bounds = {0.0, 2.0, 0.0};
  s.markovian = false;
  s.params = prm;
  return s;
}

ScenarioSpec bilinear(const Params& prm) {
  const double T = prm.at("T");
  ScenarioSpec s;
  s.name = "bilinear";
  s.description = "bilinear running cost on {-1,1}^2, Isaacs condition fails";
  s.dim = 2;
  s.horizon = T;
  s.drift = [](double, const PathView&, const Action&, const Action&) {
    return vec2(0.0, 0.0);
  };
  s.vol = [](double, const PathView&, const Action&, const Action&) {
    return Mat(Mat::Identity(2, 2));
  };
  s.running_cost = [](double, const PathView&, double, const Vec&,
                      const Action& a0, const Action& a1) {
    return a0[0] * a1[0];
  };
  s.terminal_cost = [](const PathView& p) {
    return p.state(p.step()).squaredNorm();
  };
  s.action0 = ActionSet::finite({vec1(-1.0), vec1(1.0)});
  s.action1 = ActionSet::finite({vec1(-1.0), vec1(1.0)});
  s.bounds = {0.0, 1.0, 1.0};
  s.params = prm;
  s.box_half_width = 3.0;
  return s;
}

struct Entry {
  Params defaults;
  Builder build;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> entries = {
      {"strong-gap", {{{"T", 4.0}, {"c", 1.0}, {"rho", 0.0}}, strong_gap}},
      {"barlow-control", {{{"T", 1.0}}, barlow_control}},
      {"barlow-game", {{{"T", 1.0}}, barlow_game}},
      {"weak-drift-game",
       {{{"T", 1.0}, {"c", 1.0}, {"rho", 0.0}}, weak_drift_game}},
      {"weak-degenerate",
       {{{"T", 1.0}, {"c", 1.0}, {"rho", 1.0}}, weak_degenerate}},
      {"barlow-weak", {{{"T", 1.0}}, barlow_weak}},
      {"state-indep-range", {{{"T", 1.0}}, state_indep_range}},
      {"bilinear", {{{"T", 1.0}}, bilinear}},
  };
  return entries;
}

int as_count(const std::string& key, double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e7) {
    throw Error(ErrorCode::kInvalidArgument,
                key + " must be a positive integer");
  }
  return static_cast<int>(v);
}

}  // namespace

ScenarioSpec load_scenario(const std::string& name,
                           const Overrides& overrides) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    throw Error(ErrorCode::kNotFound, "unknown scenario '" + name + "'");
  }
  Params params = it->second.defaults;
  for (const auto& [key, value] : overrides) {
    if (kGridKeys.count(key)) continue;
    if (!params.count(key)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + key + "' is not a parameter of " + name);
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kInvalidArgument, key + " must be finite");
    }
    params[key] = value;
  }
  ScenarioSpec spec = it->second.build(params);
  spec.action0 = spec.action0.with_resolution(spec.grids.n_action0);
  spec.action1 = spec.action1.with_resolution(spec.grids.n_action1);
  for (const auto& [key, value] : overrides) {
    if (key == "n_time") spec.grids.n_time = as_count(key, value);
    if (key == "n_space") spec.grids.n_space = as_count(key, value);
    if (key == "n_action0") {
      spec.grids.n_action0 = as_count(key, value);
      spec.action0 = spec.action0.with_resolution(spec.grids.n_action0);
    }
    if (key == "n_action1") {
      spec.grids.n_action1 = as_count(key, value);
      spec.action1 = spec.action1.with_resolution(spec.grids.n_action1);
    }
    if (key == "box") {
      if (!(value > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "box must be positive");
      }
      spec.box_half_width = value;
    }
  }
  return spec;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : registry()) names.push_back(name);
  return names;
}

ScenarioSpec load_scenario_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("scenario file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "scenario file needs a name");
  }
  Overrides overrides;
  for (const auto& [key, value] : doc.items()) {
    if (key == "name" || key == "run") continue;
    if (key != "params" && key != "grids") {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown scenario file field '" + key + "'");
    }
    if (!value.is_object()) {
      throw Error(ErrorCode::kInvalidArgument, key + " must be an object");
    }
    for (const auto& [k, v] : value.items()) {
      if (!v.is_number()) {
        throw Error(ErrorCode::kInvalidArgument, k + " must be numeric");
      }
      const bool grid_key = kGridKeys.count(k) > 0;
      if (grid_key != (key == "grids")) {
        throw Error(ErrorCode::kInvalidArgument,
                    "'" + k + "' does not belong in " + key);
      }
      overrides[k] = v.get<double>();
    }
  }
  return load_scenario(doc["name"].get<std::string>(), overrides);
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario_json(buf.str());
}

}  // namespace gamelab
