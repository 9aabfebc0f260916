// Copyright 2026 The HaarLab Authors. All Rights Reserved.
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


#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "haarlab/config.hpp"
#include "haarlab/examples.hpp"
#include "haarlab/io.hpp"

namespace haarlab {
namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("haarlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int RunCli(const std::string &args) {
  const std::string cmd = std::string(HAARLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(ConfigTest, ParseKeyValue) {
  std::istringstream is(
      "# grid\n"
      "d = 2\nJ = 9\n"
      "s = 0.5, 1\n"
      "p = 1.2\n"
      "q = 2, inf\n"
      "N_list = 2..5\n"
      "seed = 99   # trailing comment\n"
      "delta = 3\n");
  RunConfig c = ParseConfig(is);
  EXPECT_EQ(c.grid.d, 2);
  EXPECT_EQ(c.grid.J, 9);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.trunc.delta, 3);
  EXPECT_EQ(c.N_list, (std::vector<int>{2, 3, 4, 5}));
  ASSERT_EQ(c.q_list.size(), 2u);
  EXPECT_TRUE(std::isinf(c.q_list[1]));
  EXPECT_EQ(c.NormList().size(), 4u);
  EXPECT_EQ(c.EffectiveNs(), c.N_list);
}

TEST(ConfigTest, Rejections) {
  std::istringstream unknown("colour = red\n");
  EXPECT_THROW(ParseConfig(unknown), HaarlabError);
  std::istringstream bad("J = ten\n");
  EXPECT_THROW(ParseConfig(bad), HaarlabError);
  std::istringstream nokey("= 3\n");
  EXPECT_THROW(ParseConfig(nokey), HaarlabError);
  std::istringstream coarse("J = 4\nN_list = 2..5\n");
  EXPECT_THROW(ParseConfig(coarse).Validate(), HaarlabError);
}

TEST(ConfigTest, DefaultNs) {
  RunConfig c;
  EXPECT_EQ(c.EffectiveNs(), (std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10}));
  c.grid = GridSpec{2, 10, 1};
  EXPECT_EQ(c.EffectiveNs(), (std::vector<int>{2, 3, 4, 5, 6}));
}

TEST(ConfigTest, JsonRoundTrip) {
  std::istringstream is("s = 1.25\np = 0.9\nq = inf\nprobes = g1, band4\nfixed_K = 7\nmodel = power\n");
  RunConfig c = ParseConfig(is);
  RunConfig back = ConfigFromJson(ConfigToJson(c));
  EXPECT_EQ(ConfigToJson(back).dump(), ConfigToJson(c).dump());
  EXPECT_TRUE(std::isinf(back.q_list[0]));
  EXPECT_EQ(back.trunc.fixed_K, 7);
  EXPECT_EQ(back.probes, (std::vector<std::string>{"g1", "band4"}));
  EXPECT_EQ(DecodeReal(EncodeReal(HUGE_VAL)), HUGE_VAL);
  EXPECT_EQ(DecodeReal(EncodeReal(0.125)), 0.125);
}

TEST(IoTest, FieldBinaryRoundTrip) {
  fs::path dir = Scratch("bin");
  GridSpec s{2, 4, 1};
  GridField f = RandomBandLimited(s, 3.0, 8);
  f[5] = cplx(0.25, -1.5);
  f.is_complex = true;
  const std::string path = (dir / "f.bin").string();
  WriteFieldBinary(path, f);
  GridField g = ReadFieldBinary(path);
  EXPECT_EQ(g.spec, f.spec);
  EXPECT_EQ(g.values, f.values);
  EXPECT_EQ(g.is_complex, f.is_complex);
  EXPECT_EQ(g.compact, f.compact);
  EXPECT_THROW(ReadFieldBinary((dir / "missing.bin").string()), HaarlabError);
}

TEST(IoTest, ManifestHashIsContentBased) {
  nlohmann::json a = {{"x", 1}, {"y", "z"}};
  nlohmann::json b = {{"y", "z"}, {"x", 1}};
  EXPECT_EQ(ManifestHash(a), ManifestHash(b));
  EXPECT_EQ(ManifestHash(a).size(), 16u);
  b["x"] = 2;
  EXPECT_NE(ManifestHash(a), ManifestHash(b));
}

TEST(CliTest, ExitCodes) {
  fs::path dir = Scratch("cli_codes");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(RunCli("check --J 10" + out), 0);
  EXPECT_EQ(RunCli("check --J 10 --fault mask" + out), 3);
  EXPECT_EQ(RunCli("check --J 3" + out), 2);
  EXPECT_EQ(RunCli("norm --bogus" + out), 2);
  EXPECT_EQ(RunCli("norm --J 10 --gen zero --s 1 --p 0.8 --q 1" + out), 0);
  const std::string csv = Slurp(dir / "norm.csv");
  EXPECT_EQ(csv.rfind("# manifest ", 0), 0u);
  EXPECT_NE(csv.find("value=0\n"), std::string::npos);
  EXPECT_EQ(RunCli("norm --J 10 --gen nothing" + out), 2);
}

TEST(CliTest, DeterministicAndReplayable) {
  fs::path a = Scratch("cli_a"), b = Scratch("cli_b"), c = Scratch("cli_c");
  const std::string args = "scan --J 10 --s 0.4 --p 2 --q 3 --N-list 2..4 --probes g1,band4 --seed 5 --out ";
  ASSERT_EQ(RunCli(args + a.string()), 0);
  ASSERT_EQ(RunCli(args + b.string()), 0);
  EXPECT_EQ(Slurp(a / "scan.csv"), Slurp(b / "scan.csv"));
  EXPECT_EQ(ReadJson((a / "manifest_scan.json").string())["manifest_hash"],
            ReadJson((b / "manifest_scan.json").string())["manifest_hash"]);
  // Replaying from the manifest reproduces the table.
  ASSERT_EQ(RunCli("scan --config " + (a / "manifest_scan.json").string() + " --out " + c.string()), 0);
  EXPECT_EQ(Slurp(a / "scan.csv"), Slurp(c / "scan.csv"));
}

TEST(CliTest, GenAndAvgPipeline) {
  fs::path dir = Scratch("cli_pipe");
  ASSERT_EQ(RunCli("gen --J 9 --gen density_failure --out " + dir.string()), 0);
  ASSERT_TRUE(fs::exists(dir / "gen.bin"));
  ASSERT_EQ(RunCli("avg --J 9 --op E --N 3 --in " + (dir / "gen.bin").string() + " --out " + dir.string()), 0);
  GridField f = ReadFieldBinary((dir / "gen.bin").string());
  GridField e = ReadFieldBinary((dir / "avg_E.bin").string());
  EXPECT_LE(MaxAbsDiff(e, DyadicAverage(f, 3)), 0.0);
  EXPECT_EQ(RunCli("avg --J 10 --op E --N 3 --in " + (dir / "gen.bin").string() + " --out " + dir.string()), 2);
}

}  // namespace
}  // namespace haarlab
