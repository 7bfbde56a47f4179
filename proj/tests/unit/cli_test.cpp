// Copyright 2026 The beamlab Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "beamlab_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(BEAMLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& file, const std::string& text) { std::ofstream(file) << text; }

constexpr const char* kToy = R"({
  "master_seed": 3, "num_scenarios": 4, "split": [0.5, 0.25, 0.25],
  "codebook": {"tx_size": 16, "rx_size": 16},
  "channel": {"num_subcarriers": 16},
  "vdban": {"model_dim": 8, "block_dims": [4], "heads": 2, "ffn_hidden": 8, "head_hidden": [16]},
  "train": {"epochs": 2},
  "bct": {"hidden": 4, "epochs": 2},
  "eval": {"sigma_c": [0.0, 0.5], "m_f": [1, 2, 3]}
})";

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    write(path("toy.json"), kToy);
    ASSERT_EQ(run("generate -c " + path("toy.json") + " -o " + path("toy.ds")), 0);
  }
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("train --help"), 0);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("generate -o " + path("x.ds")), 1);
  EXPECT_EQ(run("train -d " + path("toy.ds") + " -m knn -o " + path("x.ckpt")), 1);
}

TEST_F(Cli, GenerateIsReproducible) {
  ASSERT_EQ(run("generate -c " + path("toy.json") + " -o " + path("again.ds") + " -j 2"), 0);
  EXPECT_EQ(slurp(path("toy.ds")), slurp(path("again.ds")));
  EXPECT_FALSE(fs::exists(path("again.ds.partial")));
}

TEST_F(Cli, InvalidConfigIsValidationError) {
  write(path("bad_split.json"), R"({"num_scenarios": 4, "split": [0.5, 0.5, 0.5]})");
  EXPECT_EQ(run("generate -c " + path("bad_split.json") + " -o " + path("bad.ds")), 1);
  EXPECT_FALSE(fs::exists(path("bad.ds")));
  write(path("unknown.json"), R"({"num_scenario": 4})");
  EXPECT_EQ(run("generate -c " + path("unknown.json") + " -o " + path("bad.ds")), 1);
  EXPECT_EQ(run("generate -c " + path("missing.json") + " -o " + path("bad.ds")), 1);
  EXPECT_EQ(run("eval -d " + path("missing.ds") + " -o " + path("bad.csv")), 1);
}

TEST_F(Cli, TrainWritesTraceAndCheckpoint) {
  ASSERT_EQ(run("train -d " + path("toy.ds") + " -m vdban -o " + path("v.ckpt") + " -t " +
                path("v.csv")),
            0);
  std::istringstream trace(slurp(path("v.csv")));
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line.rfind("# config_hash=", 0), 0u);
  std::getline(trace, line);
  EXPECT_EQ(line, "epoch,train_loss,train_accuracy,validation_atrr_top1");
  int rows = 0;
  while (std::getline(trace, line)) rows += line.empty() ? 0 : 1;
  EXPECT_EQ(rows, 2);
  EXPECT_TRUE(fs::exists(path("v.ckpt")));

  ASSERT_EQ(run("train -d " + path("toy.ds") + " -m bct --epochs 3 -o " + path("b.ckpt") +
                " -t " + path("b.csv")),
            0);
  std::istringstream btrace(slurp(path("b.csv")));
  rows = 0;
  while (std::getline(btrace, line)) rows += line.empty() ? 0 : 1;
  EXPECT_EQ(rows, 2 + 3);
}

TEST_F(Cli, EvalExportReport) {
  ASSERT_EQ(run("train -d " + path("toy.ds") + " -m vdban -o " + path("e_v.ckpt")), 0);
  ASSERT_EQ(run("train -d " + path("toy.ds") + " -m bct -o " + path("e_b.ckpt")), 0);
  ASSERT_EQ(run("eval -d " + path("toy.ds") + " --vdban " + path("e_v.ckpt") + " --bct " +
                path("e_b.ckpt") + " --oracle -o " + path("report.csv")),
            0);
  const std::string report = slurp(path("report.csv"));
  EXPECT_NE(report.find("topb,oracle,atrr_s,test,all,1,"), std::string::npos);
  EXPECT_NE(report.find("policy,bct_classifier,atrr_p"), std::string::npos);

  ASSERT_EQ(run("report -i " + path("report.csv") + " -o " + path("series.csv")), 0);
  EXPECT_NE(slurp(path("series.csv")).find("series,x,y"), std::string::npos);

  ASSERT_EQ(run("export -d " + path("toy.ds") + " -o " + path("export")), 0);
  EXPECT_TRUE(fs::exists(path("export/index.csv")));
  EXPECT_TRUE(fs::exists(path("export/vdf.f32")));

  // Swapping in the wrong kind of checkpoint is a validation error.
  EXPECT_EQ(run("eval -d " + path("toy.ds") + " --vdban " + path("e_b.ckpt") + " -o " +
                path("bad.csv")),
            1);
}

TEST_F(Cli, MismatchedPairSetRefused) {
  std::string other = kToy;
  other.replace(other.find("\"master_seed\": 3"), 16, "\"master_seed\": 4");
  write(path("other.json"), other);
  ASSERT_EQ(run("generate -c " + path("other.json") + " -o " + path("other.ds")), 0);
  ASSERT_EQ(run("train -d " + path("other.ds") + " -m vdban -o " + path("other.ckpt")), 0);
  EXPECT_EQ(run("eval -d " + path("toy.ds") + " --vdban " + path("other.ckpt") + " -o " +
                path("mismatch.csv")),
            1);
  EXPECT_FALSE(fs::exists(path("mismatch.csv")));
}

}  // namespace
