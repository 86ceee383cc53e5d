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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(GAMELAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gamelab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, UnknownScenarioExitsTwo) {
  EXPECT_EQ(run_cli("simulate --scenario nope --quiet"), 2);
  EXPECT_EQ(run_cli("run nope --quiet"), 2);
}

TEST(Cli, BadArgumentsFail) {
  EXPECT_NE(run_cli("dpp --scenario weak-drift-game --nx abc"), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
  EXPECT_EQ(run_cli("simulate --scenario bilinear --set T=-1 --quiet"), 1);
}

TEST(Cli, HamiltonianScanWritesCsv) {
  const auto out = scratch("scan");
  ASSERT_EQ(run_cli("hamiltonian-scan --scenario bilinear --queries 5 --quiet "
                    "--out " + out.string()),
            0);
  std::ifstream in(out / "hamiltonian_scan.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("query,z0,", 0), 0u) << header;
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 5);
  fs::remove_all(out);
}

TEST(Cli, DppWritesJson) {
  const auto out = scratch("dpp");
  ASSERT_EQ(run_cli("dpp --scenario weak-drift-game --nt 16 --nx 21 --quiet "
                    "--out " + out.string()),
            0);
  const auto j = nlohmann::json::parse(slurp(out / "dpp.json"));
  EXPECT_EQ(j["scenario"], "weak-drift-game");
  EXPECT_GE(j["upper"].get<double>(), j["lower"].get<double>() - 1e-12);
  fs::remove_all(out);
}

TEST(Cli, SimulateIsSeeded) {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  const std::string args =
      "simulate --scenario barlow-game --npaths 500 --nsteps 16 --seed 9 "
      "--quiet --out ";
  ASSERT_EQ(run_cli(args + a.string()), 0);
  ASSERT_EQ(run_cli(args + b.string()), 0);
  EXPECT_EQ(slurp(a / "simulate_paths.csv"), slurp(b / "simulate_paths.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
