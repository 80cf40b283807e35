// Copyright 2026 The DMMD Authors. All Rights Reserved.
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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "commands.hpp"
#include "csv_io.hpp"
#include "dmmd/errors.hpp"
#include "dmmd/simulation.hpp"
#include "report.hpp"

namespace dmmd::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("dmmd_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dmmd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Matrix parse(const std::string& text, CsvOptions opts = {}) {
  std::istringstream in(text);
  return parse_matrix_csv(in, opts);
}

TEST(Csv, ParsesPlainAndQuotedFields) {
  const Matrix m = parse("1,2.5\n\"3\",-4e1\n\n");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 1), 2.5);
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(m(1, 1), -40.0);
}

TEST(Csv, HeaderAndDelimiter) {
  const Matrix m = parse("a;\"b;c\"\n1;2\r\n3;4\n", {true, ';'});
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 1), 4.0);
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse("1,2\n3\n"), InputError);
  EXPECT_THROW(parse("1,x\n"), InputError);
  EXPECT_THROW(parse("1,nan\n"), InputError);
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("a,b\n", {true, ','}), InputError);
  try {
    parse("1,2\n3,oops\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Csv, RoundTripIsExact) {
  const GroundTruth t = generate({12, 9, 3, 2, 1, 1, 1.0, 4});
  std::ostringstream out;
  write_matrix_csv(out, t.x1);
  EXPECT_EQ(parse(out.str()), t.x1);
}

TEST(Csv, MissingFileIsInputError) {
  EXPECT_THROW(read_matrix_csv("/nonexistent/dmmd.csv"), InputError);
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    const SimulationConfig cfg{30, 24, 4, 3, 1, 2, 1.0, 5};
    truth_ = generate(cfg);
    write_matrix_csv(dir_.path() / "a1.csv", truth_.a1);
    write_matrix_csv(dir_.path() / "a2.csv", truth_.a2);
    write_matrix_csv(dir_.path() / "x1.csv", truth_.x1);
    write_matrix_csv(dir_.path() / "x2.csv", truth_.x2);
  }
  std::string file(const std::string& name) const { return (dir_.path() / name).string(); }

  TempDir dir_;
  GroundTruth truth_;
};

TEST_F(CliRun, DecomposeNoiselessReportsFullVariance) {
  const auto r = invoke({"decompose", "--x1", file("a1.csv"), "--x2", file("a2.csv"), "--r1",
                         "4", "--r2", "3", "--rc", "1", "--rr", "2", "--out", file("fit")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(file("fit") + "/report.json"));
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(j["views"][k]["variance_explained"]["total_signal"].get<double>(), 100.0, 1e-6);
  }
  EXPECT_FALSE(j.contains("timings"));
  for (const char* f : {"A1.csv", "A2.csv", "Jc1.csv", "Ir2.csv", "M.csv", "N.csv"}) {
    EXPECT_TRUE(fs::exists(file("fit") + "/" + f)) << f;
  }
  EXPECT_EQ(read_matrix_csv(file("fit") + "/M.csv").cols(), 1);
}

TEST_F(CliRun, ReportJsonRoundTrips) {
  const auto r = invoke({"decompose", "--x1", file("x1.csv"), "--x2", file("x2.csv"), "--variant",
                         "iterative", "--out", file("fit")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(slurp(file("fit") + "/report.json"));
  EXPECT_EQ(to_json(report_from_json(j)), j);
  EXPECT_EQ(j["variant"], "iterative");
}

TEST_F(CliRun, MissingInputIsUsageErrorAndWritesNothing) {
  const auto r = invoke({"decompose", "--x1", file("x1.csv"), "--out", file("fit")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(fs::exists(file("fit")));
}

TEST_F(CliRun, InconsistentRanksAreUsageErrors) {
  const auto r = invoke({"decompose", "--x1", file("x1.csv"), "--x2", file("x2.csv"), "--r2", "2",
                         "--rc", "3", "--out", file("fit")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("r_c exceeds min(r1,r2)"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(file("fit")));
}

TEST_F(CliRun, BadDataIsInputError) {
  std::ofstream(file("bad.csv")) << "1,2\n3\n";
  const auto r = invoke({"decompose", "--x1", file("bad.csv"), "--x2", file("x2.csv"), "--out",
                         file("fit")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_FALSE(fs::exists(file("fit")));
}

TEST_F(CliRun, RanksIsDeterministic) {
  const auto a = invoke({"ranks", "--x1", file("x1.csv"), "--x2", file("x2.csv")});
  const auto b = invoke({"ranks", "--x1", file("x1.csv"), "--x2", file("x2.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j.contains("angles_col"));
  EXPECT_TRUE(j["flags"].contains("r1_low_confidence"));
}

TEST_F(CliRun, IdenticalViewsAreFullyJoint) {
  const auto r = invoke({"ranks", "--x1", file("x1.csv"), "--x2", file("x1.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["r1"], j["r2"]);
  EXPECT_EQ(j["rc"], j["r1"]);
  EXPECT_EQ(j["rr"], j["r1"]);
}

TEST_F(CliRun, SimulateIsReproducible) {
  const std::vector<std::string> base{"simulate", "--preset", "S1", "--reps", "2",
                                      "--scale", "0.2", "--seed", "9"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", file("s1")});
  b.insert(b.end(), {"--out", file("s2"), "--threads", "2"});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(file("s1") + "/results.csv"), slurp(file("s2") + "/results.csv"));
  EXPECT_EQ(slurp(file("s1") + "/config.json"), slurp(file("s2") + "/config.json"));
}

TEST_F(CliRun, SimulateRejectsBadFlags) {
  EXPECT_EQ(invoke({"simulate", "--preset", "S9", "--out", file("s")}).code, kExitUsage);
  EXPECT_EQ(invoke({"simulate", "--preset", "S1", "--n", "20", "--out", file("s")}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"simulate", "--preset", "S1", "--reps", "0", "--out", file("s")}).code,
            kExitUsage);
  EXPECT_FALSE(fs::exists(file("s")));
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST_F(CliRun, ConfigFileAndEnvironment) {
  std::ofstream(file("cfg.json")) << R"({"preset": "custom", "n": 24, "p": 20, "r1": 3,
      "r2": 3, "rc": 1, "rr": 1, "reps": 2, "seed": 4})";
  ::setenv("DMMD_THREADS", "2", 1);
  const auto r = invoke({"simulate", "--config", file("cfg.json"), "--reps", "1", "--out",
                         file("s")});
  ::unsetenv("DMMD_THREADS");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cfg = nlohmann::json::parse(slurp(file("s") + "/config.json"));
  EXPECT_EQ(cfg["reps"], 1);
  EXPECT_EQ(cfg["preset"], "custom");
  EXPECT_EQ(cfg["replications"][0]["n"], 24);
}

}  // namespace
}  // namespace dmmd::cli
