// Copyright 2026 The ctxwatch Authors
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

#ifdef CTXWATCH_CLI

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include <gtest/gtest.h>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome RunCli(const std::string& args) {
  std::string cmd = std::string(CTXWATCH_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) o.out.append(buf.data(), n);
  int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string Data(const std::string& rel) { return std::string(CTXWATCH_DATA_DIR) + "/" + rel; }

TEST(CliTest, RunAndReplayAgree) {
  auto trace = (std::filesystem::temp_directory_path() / "ctxwatch_cli_test.trace").string();
  auto run = RunCli("run --scenario " + Data("scenarios/plant_overlap.cfg") + " --spec " +
                    Data("specs/phi1_leak.xml") + " --out " + trace);
  ASSERT_EQ(run.code, 0) << run.out;
  EXPECT_NE(run.out.find("NOTIFY 1 phi1 cut="), std::string::npos) << run.out;
  auto replay = RunCli("replay " + trace + " --spec " + Data("specs/phi1_leak.xml"));
  ASSERT_EQ(replay.code, 0) << replay.out;
  EXPECT_NE(replay.out.find("FINAL 1 detected"), std::string::npos) << replay.out;
  std::filesystem::remove(trace);
}

TEST(CliTest, InputErrorsExitWithTwo) {
  EXPECT_EQ(RunCli("run --scenario /nonexistent.cfg --spec x.xml").code, 2);
  EXPECT_EQ(RunCli("bench --grid regex:processes=9").code, 2);
  EXPECT_EQ(RunCli("frobnicate").code, 2);
  EXPECT_EQ(RunCli("run --scenario " + Data("scenarios/plant_overlap.cfg") + " --spec " +
                   Data("scenarios/plant_overlap.cfg"))
                .code,
            2);
}

TEST(CliTest, ValidateReportsEverySuite) {
  auto v = RunCli("validate --queue-traces 20 --lattice-traces 10 --pairs 20 --instances 5 "
                  "--product-vectors 3 --prune-traces 3 --max-processes 3 --max-states 4");
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_EQ(v.out.find("FAIL"), std::string::npos) << v.out;
}

}  // namespace

#endif  // CTXWATCH_CLI
