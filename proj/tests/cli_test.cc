// Copyright 2026 The vprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "vp/cli/cli.h"
#include "vp/pipeline/report.h"

namespace vp {
namespace {

namespace fs = std::filesystem;

const std::string kRef = std::string(VP_CONFIG_DIR) + "/ref.toml";

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

TEST(CliTest, RankWritesCsv) {
  const fs::path dir = TempDir("vp_cli_rank");
  const CliRun r = Invoke({"rank", "-c", kRef, "-o", dir.string(), "--rankers",
                        "likelihood", "zlib"});
  ASSERT_EQ(r.code, 0) << r.err;
  const fs::path csv = dir / "ranking.csv";
  ASSERT_TRUE(fs::exists(csv));
  const ReportTable t = ParseCsv(ReadTextFile(csv), "ranking");
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_NE(r.out.find("likelihood"), std::string::npos);
  fs::remove_all(dir);
}

TEST(CliTest, OutOfBoundsOverrideExitsOne) {
  const CliRun r = Invoke({"rank", "-c", kRef, "--set", "scores.min_k_fraction=1.5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("min_k_fraction"), std::string::npos) << r.err;
}

TEST(CliTest, UnknownKeyExitsOne) {
  const CliRun r = Invoke({"rank", "-c", kRef, "--set", "scores.nope=1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope"), std::string::npos) << r.err;
}

TEST(CliTest, MissingConfigIsAUsageError) {
  EXPECT_EQ(Invoke({"rank", "-c", "/no/such/file.toml"}).code, 1);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 1);
}

TEST(CliTest, SelftestPasses) {
  const CliRun r = Invoke({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(CliTest, ReportRerendersArtifacts) {
  const fs::path dir = TempDir("vp_cli_report");
  ASSERT_EQ(Invoke({"rank", "-c", kRef, "-o", dir.string(), "--rankers", "likelihood"}).code,
            0);
  const fs::path out = dir / "rendered";
  const CliRun r = Invoke({"report", (dir / "trial_0").string(), "-o", out.string(),
                        "--formats", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(fs::is_empty(out));
  fs::remove_all(dir);
}

TEST(CliTest, BinaryRuns) {
  const std::string cmd = std::string(VP_CLI_PATH) + " --help > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}

}  // namespace
}  // namespace vp
