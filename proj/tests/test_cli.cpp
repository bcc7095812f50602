// Copyright 2026 The SplitNash Authors
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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "splitnash/cli.hpp"

namespace splitnash::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  args.push_back("--deterministic");
  return Json::parse(call(std::move(args)).out);
}

TEST(Cli, VerifyNashExitCodes) {
  EXPECT_EQ(call({"verify-nash", "example-4.1:E2", "--profile", "9,12"}).code, kOk);
  EXPECT_EQ(call({"verify-nash", "example-4.1:E1", "--profile", "1,2,4"}).code, kFalse);
  EXPECT_EQ(call({"verify-nash", "example-4.1:E1", "--profile", "1,,4"}).code, kInputError);
  EXPECT_EQ(call({"verify-nash", "example-4.1:E1", "--profile", "1,2"}).code, kInputError);
  EXPECT_EQ(call({"verify-nash", "example-4.1:E2", "--profile", "-1,2"}).code, kInputError);
  EXPECT_EQ(call({"verify-nash", "example-4.1"}).code, kInputError);
}

TEST(Cli, ParseErrorsAreInputErrors) {
  EXPECT_EQ(call({}).code, kInputError);
  EXPECT_EQ(call({"frobnicate"}).code, kInputError);
  EXPECT_EQ(call({"verify-nash", "example-4.1:E2", "--profile", "9,12", "--format", "xml"}).code, kInputError);
  EXPECT_EQ(call({"verify-nash", "example-4.1:E2", "--profile", "9,12", "--tol", "-1"}).code, kInputError);
  EXPECT_EQ(call({"audit", "unknown-audit"}).code, kInputError);
  const Outcome help = call({"--help"});
  EXPECT_EQ(help.code, kOk);
  EXPECT_NE(help.out.find("verify-nash"), std::string::npos);
}

TEST(Cli, JsonReportShape) {
  const Json j = json_of({"verify-nash", "example-4.1:E1", "--profile", "1,2,4"});
  for (const char* key : {"schema_version", "command", "instances", "budget", "verdicts", "results", "discrepancies",
                          "exit_code", "duration_seconds"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["command"], "verify-nash");
  EXPECT_EQ(j["exit_code"], 1);
  EXPECT_EQ(j["duration_seconds"], 0.0);
  EXPECT_EQ(j["verdicts"][0]["name"], "nash_equilibrium");
  EXPECT_FALSE(j["verdicts"][0]["value"].get<bool>());
  EXPECT_NEAR(j["results"]["nash"]["players"][2]["regret"].get<double>(), 0.1715728752538097, 1e-6);
}

TEST(Cli, DeterministicOutputIsByteStable) {
  const std::vector<std::string> args{"cdp-check", "quadratic-sanity", "--samples", "100", "--format", "json",
                                      "--deterministic"};
  EXPECT_EQ(call(args).out, call(args).out);
}

TEST(Cli, ExampleAuditReportsDiscrepancy) {
  const Json j = json_of({"audit", "example-4.1"});
  EXPECT_EQ(j["exit_code"], kDiscrepancy);
  ASSERT_FALSE(j["discrepancies"].empty());
  EXPECT_EQ(j["results"]["image"], Json::array({9.0, 12.0}));
}

TEST(Cli, SplitCommands) {
  EXPECT_EQ(call({"verify-split", "quadratic-sanity", "--profile", "1,2"}).code, kOk);
  EXPECT_EQ(call({"verify-split", "example-4.1", "--profile", "1,2,4"}).code, kFalse);
  const Json solved = json_of({"solve-split", "quadratic-sanity"});
  ASSERT_EQ(solved["results"]["solutions"].size(), 1u);
  EXPECT_EQ(call({"solve-split", "quadratic-mismatch"}).code, kFalse);
  EXPECT_EQ(call({"solve-split", "/nonexistent/file.json"}).code, kInputError);
}

TEST(Cli, BertrandAndMarkovAudits) {
  const Json e = json_of({"bertrand-enumerate", "--costs", "1,2", "--range", "0,5", "--grid-step", "0.05"});
  EXPECT_EQ(e["exit_code"], kOk);
  EXPECT_GT(e["results"]["count"].get<int>(), 0);
  EXPECT_EQ(call({"audit", "thm-6.2", "--diagonal"}).code, kOk);
  EXPECT_EQ(call({"audit", "markov-split"}).code, kDiscrepancy);
  EXPECT_EQ(call({"bertrand-enumerate", "--costs", "2,1"}).code, kInputError);
}

TEST(Cli, FileInputAndOutput) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "splitnash_cli_test";
  fs::create_directories(dir);
  const fs::path game = dir / "game.json";
  std::ofstream(game) << R"j({"players": ["p", "q"],
    "strategy_sets": [{"lo": 0, "hi": 10}, {"lo": 0, "hi": null}],
    "utilities": ["-((p - 3)^2)", "-((q - p)^2)"]})j";
  const fs::path report = dir / "report.json";
  const Outcome o = call({"verify-nash", game.string(), "--profile", "3,3", "--format", "json", "--out",
                          report.string()});
  EXPECT_EQ(o.code, kOk);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(report);
  const Json j = Json::parse(in);
  EXPECT_TRUE(j["verdicts"][0]["value"].get<bool>());
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_EQ(call({"verify-nash", (dir / "bad.json").string(), "--profile", "1"}).code, kInputError);
  std::ofstream(dir / "bad_expr.json") << R"({"players": ["p"], "strategy_sets": [{"lo": 0}], "utilities": ["p +"]})";
  EXPECT_EQ(call({"verify-nash", (dir / "bad_expr.json").string(), "--profile", "1"}).code, kInputError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace splitnash::cli
