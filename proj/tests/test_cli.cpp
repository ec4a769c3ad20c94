// Copyright 2026 The qswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qswap/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace qswap::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qswap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code =
      run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("qswap_cli_") + info->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string dir(const std::string& sub = "") const {
    return (sub.empty() ? dir_ : dir_ / sub).string();
  }

  fs::path dir_;
};

TEST(ParseGrid, RangeIncludesStop) {
  const auto g = parse_grid("0.05:1.5:0.05");
  ASSERT_EQ(g.size(), 30u);
  EXPECT_DOUBLE_EQ(g.front(), 0.05);
  EXPECT_DOUBLE_EQ(g.back(), 1.5);
  EXPECT_DOUBLE_EQ(g[2], 0.15);
}

TEST(ParseGrid, ListsAndSingleValues) {
  EXPECT_EQ(parse_grid("0.2,0.4"), (std::vector<double>{0.2, 0.4}));
  EXPECT_EQ(parse_grid("2"), (std::vector<double>{2.0}));
}

TEST(ParseGrid, RejectsMalformedInput) {
  EXPECT_THROW(parse_grid("1:0:0.1"), UsageError);
  EXPECT_THROW(parse_grid("0:1:0"), UsageError);
  EXPECT_THROW(parse_grid("0:1"), UsageError);
  EXPECT_THROW(parse_grid("abc"), UsageError);
  EXPECT_THROW(parse_grid("0.1x"), UsageError);
  EXPECT_THROW(parse_grid("0:1e9:1e-3"), UsageError);
}

TEST(AlphaChoiceTest, Forms) {
  EXPECT_EQ(AlphaChoice::parse("max").policy, AlphaPolicy::Max);
  EXPECT_EQ(AlphaChoice::parse("0").policy, AlphaPolicy::Zero);
  const AlphaChoice v = AlphaChoice::parse("0.1");
  EXPECT_FALSE(v.policy.has_value());
  EXPECT_DOUBLE_EQ(v.value, 0.1);
  EXPECT_THROW(AlphaChoice::parse("lots"), UsageError);
}

TEST_F(CliTest, SweepWritesCsvWithMetadata) {
  const Result r = invoke({"sweep", "--r", "0.2:0.6:0.2", "--out-dir", dir()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(dir_ / "sweep.csv");
  EXPECT_EQ(csv.rfind("# qswap sweep", 0), 0u);
  std::istringstream lines(csv);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 2 + 3);
  EXPECT_NE(csv.find("eta_plus_booster"), std::string::npos);
}

TEST_F(CliTest, SweepIsByteIdenticalAcrossThreadCounts) {
  ASSERT_EQ(invoke({"sweep", "--out-dir", dir("a"), "--threads", "1"}).code,
            kExitOk);
  ASSERT_EQ(invoke({"sweep", "--out-dir", dir("b"), "--threads", "4"}).code,
            kExitOk);
  EXPECT_EQ(slurp(dir_ / "a" / "sweep.csv"), slurp(dir_ / "b" / "sweep.csv"));
}

TEST_F(CliTest, RunCircuitIsReproducibleForFixedSeed) {
  const std::vector<std::string> base{"run-circuit", "--r",   "0.3,0.5",
                                      "--shots",     "2000",  "--reps",
                                      "3",           "--seed", "5"};
  auto with_dir = [&](const std::string& d) {
    auto v = base;
    v.push_back("--out-dir");
    v.push_back(dir(d));
    return v;
  };
  ASSERT_EQ(invoke(with_dir("a")).code, kExitOk);
  ASSERT_EQ(invoke(with_dir("b")).code, kExitOk);
  for (const char* f : {"counts.json", "energies.csv", "energies_summary.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    EXPECT_FALSE(slurp(dir_ / "a" / f).empty()) << f;
  }
}

TEST_F(CliTest, PhaseDiagramJsonFormat) {
  const Result r = invoke({"phase-diagram", "--r", "0.5,0.9", "--format",
                           "json", "--out-dir", dir()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "phase_diagram.json"));
  EXPECT_EQ(j.at("rows").size(), 16u * 2u);
}

TEST_F(CliTest, TranspileReport) {
  const Result r = invoke({"transpile", "--out-dir", dir()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "basis_circuit.json"));
  EXPECT_EQ(j.at("schema"), "qswap.basis_circuit");
  EXPECT_FALSE(slurp(dir_ / "transpile_report.txt").empty());
}

TEST_F(CliTest, TomographyOutputs) {
  const Result r = invoke({"tomography", "--r", "0.4", "--shots", "4000",
                           "--reps", "2", "--out-dir", dir()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "states.json"));
  EXPECT_TRUE(fs::exists(dir_ / "ledger.csv"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"sweep", "--r", "1:0:1", "--out-dir", dir()}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"sweep", "--lambda", "1.5", "--out-dir", dir()}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"sweep", "--alpha", "0.9", "--out-dir", dir()}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"run-circuit", "--shots", "0", "--out-dir", dir()}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"sweep", "--format", "xml", "--out-dir", dir()}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ConfigFileIsOverriddenByFlags) {
  fs::create_directories(dir_);
  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"r": "0.2,0.4", "lambda": 0.3})";
  ASSERT_EQ(invoke({"sweep", "--config", cfg.string(), "--lambda", "0.5",
                    "--out-dir", dir("o")})
                .code,
            kExitOk);
  const std::string csv = slurp(dir_ / "o" / "sweep.csv");
  EXPECT_NE(csv.find("r=0.2,0.4"), std::string::npos);
  EXPECT_NE(csv.find("lambda=0.5"), std::string::npos);
  std::ofstream(cfg) << R"({"nonsense": 1})";
  EXPECT_EQ(invoke({"sweep", "--config", cfg.string(), "--out-dir", dir("o")})
                .code,
            kExitUsage);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ::setenv(kOutputDirEnv, dir("env").c_str(), 1);
  const Result r = invoke({"sweep", "--r", "0.5"});
  ::unsetenv(kOutputDirEnv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "env" / "sweep.csv"));
}

}  // namespace
}  // namespace qswap::cli
