// Copyright 2026 The QCPM Authors
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

#include "qcpm/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcpm/data_io.hpp"

namespace qcpm {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t data_rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::size_t n = 0;
  bool columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.starts_with("#")) continue;
    if (!columns) {
      columns = true;
      continue;
    }
    ++n;
  }
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qcpm_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Short teacher-student fit used as the model for sampling and diagnostics.
  void train_small(const std::vector<std::string>& extra = {}) {
    std::vector<std::string> args = {"train", "--synth", "teacher_student", "--epochs", "100",
                                     "--lr", "0.1", "--diagnostics", "1",
                                     "--record", path("rec.csv"), "--params-out", path("p.txt")};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result r = run(args);
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, MissingDataFileIsUsageError) {
  const Result r = run({"train", "--data", path("absent.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("absent.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  EXPECT_EQ(run({"train", "--synth", "gaussian_2d", "--frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"train"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--synth", "nope"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--synth", "gaussian_2d", "--n", "0"}).code, kExitUsage);
}

TEST_F(CliTest, HelpExitsZero) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("compare-cc"), std::string::npos);
}

TEST_F(CliTest, MalformedGridIsRuntimeError) {
  std::ofstream(path("bad.csv")) << "# label: x\nz,Q,value\n0.1,2,3\n";
  const Result r = run({"train", "--data", path("bad.csv"), "--epochs", "1", "--lr", "0.1",
                        "--record", path("r.csv"), "--params-out", path("p.txt")});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("bad.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, TrainWritesRecordAndParams) {
  train_small();
  const TrainRecord rec = read_record(path("rec.csv"));
  EXPECT_EQ(rec.loss.size(), 100u);
  EXPECT_TRUE(rec.config.arch.use_correlation);
  EXPECT_EQ(read_model(path("p.txt")).arch.n_qubits, 4);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  std::ofstream(path("c.cfg")) << "# comment\nsynth = gaussian_2d\nepochs = 7\nlr = 0.05,0.1\n"
                               << "no-correlation = true\nrecord = " << path("rec.csv") << "\n"
                               << "params-out: " << path("p.txt") << "\n";
  Result r = run({"train", "--config", path("c.cfg"), "--epochs", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const TrainRecord rec = read_record(path("rec.csv"));
  EXPECT_EQ(rec.config.epochs, 3);
  EXPECT_EQ(rec.config.learning_rates, (std::vector<double>{0.05, 0.1}));
  EXPECT_FALSE(rec.config.arch.use_correlation);

  std::ofstream(path("bad.cfg")) << "epochz = 4\n";
  EXPECT_EQ(run({"train", "--config", path("bad.cfg"), "--synth", "gaussian_2d"}).code, kExitUsage);
}

TEST_F(CliTest, NoCorrelationFlag) {
  train_small({"--no-correlation"});
  EXPECT_FALSE(read_model(path("p.txt")).arch.use_correlation);
  for (double c : read_record(path("rec.csv")).nonpurity) EXPECT_EQ(c, 0.0);
}

TEST_F(CliTest, SampleIsDeterministic) {
  train_small();
  for (const char* name : {"a.csv", "b.csv"}) {
    const Result r = run({"sample", "--params", path("p.txt"), "--shots", "50000", "--seed", "9",
                          "--out", path(name)});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  run({"sample", "--params", path("p.txt"), "--shots", "50000", "--seed", "10", "--out", path("c.csv")});
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(CliTest, SampleExtendedAndExact) {
  train_small();
  Result r = run({"sample", "--params", path("p.txt"), "--s", "2", "--shots", "16000000",
                  "--out", path("h.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(data_rows(path("h.csv")), 4096u);
  const HistogramFile h = read_histogram(path("h.csv"));
  std::uint64_t total = 0;
  for (const auto& row : h.rows) total += row.count;
  EXPECT_EQ(total, 16000000u);

  r = run({"sample", "--params", path("p.txt"), "--exact-only", "--out", path("e.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const HistogramFile e = read_histogram(path("e.csv"));
  EXPECT_TRUE(e.exact);
  EXPECT_EQ(e.rows.size(), 256u);
  EXPECT_EQ(run({"sample", "--params", path("p.txt"), "--s", "-1"}).code, kExitUsage);
}

TEST_F(CliTest, DiagnoseSeries) {
  train_small();
  const Result r = run({"diagnose", "--record", path("rec.csv"), "--nonpurity-trace",
                        "--params", path("p.txt"), "--z-sweep", "purity", "--entropy", "Q",
                        "--out-dir", path("d")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(data_rows(dir_ / "d" / "nonpurity_vs_epoch.csv"), 100u);
  EXPECT_EQ(data_rows(dir_ / "d" / "purity_vs_z.csv"), 512u + 31u);
  EXPECT_EQ(data_rows(dir_ / "d" / "entropy_vs_ff.csv"), 1u);
  EXPECT_EQ(run({"diagnose", "--nonpurity-trace"}).code, kExitUsage);
  EXPECT_EQ(run({"diagnose"}).code, kExitUsage);
}

TEST_F(CliTest, MutualInformationWithoutCorrelationIsZero) {
  train_small({"--no-correlation"});
  const Result r = run({"diagnose", "--params", path("p.txt"), "--z-sweep", "mutual_information",
                        "--resolution", "64", "--out-dir", path("d")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const DiagnosticSeries s = read_series((dir_ / "d" / "mutualinfo_vs_z.csv").string());
  ASSERT_FALSE(s.ordinate.empty());
  for (double y : s.ordinate) EXPECT_EQ(y, 0.0);
}

TEST_F(CliTest, CompareTable) {
  const Result r = run({"compare-cc", "--synth", "gaussian_2d", "--n", "2", "--depth", "1",
                        "--epochs", "20", "--lr", "0.1", "--n-seeds", "3", "--out", path("t.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("label,seed,r2_with_cc,r2_without_cc"), std::string::npos);
  EXPECT_NE(r.out.find("mean R2 with CC: "), std::string::npos);
  EXPECT_EQ(data_rows(path("t.csv")), 3u);
  EXPECT_EQ(run({"compare-cc"}).code, kExitUsage);
}

}  // namespace
}  // namespace qcpm
