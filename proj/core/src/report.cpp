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

#include "gamelab/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gamelab/error.hpp"

namespace gamelab {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "report: " + what);
}

void expect_keys(const json& j, const std::set<std::string>& required,
                 const std::set<std::string>& optional,
                 const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!required.count(k) && !optional.count(k)) {
      bad("unknown field '" + k + "' in " + where);
    }
  }
  for (const auto& k : required) {
    if (!j.contains(k)) bad("missing field '" + k + "' in " + where);
  }
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) bad("field '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) bad("field '" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_boolean()) bad("field '" + key + "' must be a boolean");
  return v.get<bool>();
}

const json& get_array(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) bad("field '" + key + "' must be an array");
  return v;
}

}  // namespace

bool ExperimentReport::passed() const {
  for (const auto& m : methods) {
    if (!m.pass) return false;
  }
  for (const auto& d : deltas) {
    if (!d.pass) return false;
  }
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  for (const auto& s : stages) {
    if (s.status != "ok") return false;
  }
  return true;
}

std::string to_json(const ExperimentReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  j["params"] = params;
  j["methods"] = json::array();
  for (const auto& m : r.methods) {
    json e = {{"method", m.method},
              {"value", number(m.value)},
              {"uncertainty", number(m.uncertainty)},
              {"tolerance", number(m.tolerance)},
              {"pass", m.pass}};
    if (m.reference) e["reference"] = number(*m.reference);
    j["methods"].push_back(e);
  }
  j["deltas"] = json::array();
  for (const auto& d : r.deltas) {
    j["deltas"].push_back({{"a", d.a},
                           {"b", d.b},
                           {"delta", number(d.delta)},
                           {"tolerance", number(d.tolerance)},
                           {"pass", d.pass}});
  }
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"value", number(c.value)},
                           {"uncertainty", number(c.uncertainty)},
                           {"method", c.method},
                           {"detail", c.detail}});
  }
  j["stages"] = json::array();
  for (const auto& s : r.stages) {
    j["stages"].push_back(
        {{"name", s.name}, {"status", s.status}, {"error", s.error}});
  }
  j["passed"] = r.passed();
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("parse error: ") + e.what());
  }
  expect_keys(j,
              {"schema_version", "scenario", "seed", "params", "methods",
               "deltas", "checks", "stages"},
              {"passed"}, "report");
  ExperimentReport r;
  if (!j.at("schema_version").is_number_integer()) {
    bad("schema_version must be an integer");
  }
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kReportSchemaVersion) {
    bad("unsupported schema_version " + std::to_string(r.schema_version));
  }
  r.scenario = get_string(j, "scenario");
  if (!j.at("seed").is_number_unsigned()) bad("seed must be unsigned");
  r.seed = j.at("seed").get<std::uint64_t>();
  const json& params = j.at("params");
  if (!params.is_object()) bad("params must be an object");
  for (const auto& [k, v] : params.items()) r.params[k] = get_number(params, k);

  for (const auto& e : get_array(j, "methods")) {
    expect_keys(e, {"method", "value", "uncertainty", "tolerance", "pass"},
                {"reference"}, "methods[]");
    MethodValue m;
    m.method = get_string(e, "method");
    m.value = get_number(e, "value");
    m.uncertainty = get_number(e, "uncertainty");
    m.tolerance = get_number(e, "tolerance");
    m.pass = get_bool(e, "pass");
    if (e.contains("reference")) m.reference = get_number(e, "reference");
    r.methods.push_back(m);
  }
  for (const auto& e : get_array(j, "deltas")) {
    expect_keys(e, {"a", "b", "delta", "tolerance", "pass"}, {}, "deltas[]");
    CrossDelta d;
    d.a = get_string(e, "a");
    d.b = get_string(e, "b");
    d.delta = get_number(e, "delta");
    d.tolerance = get_number(e, "tolerance");
    d.pass = get_bool(e, "pass");
    r.deltas.push_back(d);
  }
  for (const auto& e : get_array(j, "checks")) {
    expect_keys(e, {"name", "pass", "value", "uncertainty", "method", "detail"},
                {}, "checks[]");
    CheckResult c;
    c.name = get_string(e, "name");
    c.pass = get_bool(e, "pass");
    c.value = get_number(e, "value");
    c.uncertainty = get_number(e, "uncertainty");
    c.method = get_string(e, "method");
    c.detail = get_string(e, "detail");
    r.checks.push_back(c);
  }
  for (const auto& e : get_array(j, "stages")) {
    expect_keys(e, {"name", "status", "error"}, {}, "stages[]");
    StageRecord s;
    s.name = get_string(e, "name");
    s.status = get_string(e, "status");
    s.error = get_string(e, "error");
    r.stages.push_back(s);
  }
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string timings_json(const std::vector<StageTiming>& timings) {
  json j = json::array();
  for (const auto& t : timings) {
    j.push_back({{"stage", t.name}, {"seconds", t.seconds}});
  }
  return j.dump(2) + "\n";
}

void add_cross_deltas(ExperimentReport& report) {
  const auto& m = report.methods;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].reference || !std::isfinite(m[i].value)) continue;
    for (std::size_t k = i + 1; k < m.size(); ++k) {
      if (!m[k].reference || !std::isfinite(m[k].value)) continue;
      if (*m[k].reference != *m[i].reference) continue;
      CrossDelta d;
      d.a = m[i].method;
      d.b = m[k].method;
      d.delta = m[i].value - m[k].value;
      d.tolerance = m[i].tolerance + m[k].tolerance;
      d.pass = std::abs(d.delta) <= d.tolerance;
      report.deltas.push_back(d);
    }
  }
}

}  // namespace gamelab
