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

#ifndef GAMELAB_REPORT_HPP_
#define GAMELAB_REPORT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gamelab {

inline constexpr int kReportSchemaVersion = 1;

struct MethodValue {
  std::string method;  // e.g. "lattice-upper", "bsde-y0"
  double value = 0.0;
  double uncertainty = 0.0;  // standard error or 0 for deterministic methods
  double tolerance = 0.0;    // declared acceptance tolerance vs reference
  std::optional<double> reference;
  bool pass = true;
};

struct CrossDelta {
  std::string a;
  std::string b;
  double delta = 0.0;
  double tolerance = 0.0;  // sum of the two methods' tolerances
  bool pass = true;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double uncertainty = 0.0;
  std::string method;
  std::string detail;
};

struct StageRecord {
  std::string name;
  std::string status;  // "ok", "failed"
  std::string error;
};

// Deterministic for a fixed invocation; wall-clock timings are written to a
// separate file.
struct ExperimentReport {
  int schema_version = kReportSchemaVersion;
  std::string scenario;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::vector<MethodValue> methods;
  std::vector<CrossDelta> deltas;
  std::vector<CheckResult> checks;
  std::vector<StageRecord> stages;

  bool passed() const;
};

std::string to_json(const ExperimentReport& report);
// Rejects unknown fields, missing fields and other schema versions with
// kInvalidArgument.
ExperimentReport report_from_json(const std::string& text);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};
std::string timings_json(const std::vector<StageTiming>& timings);

// Fills `deltas` with every pairwise difference of methods that share a
// reference.
void add_cross_deltas(ExperimentReport& report);

}  // namespace gamelab

#endif  // GAMELAB_REPORT_HPP_
