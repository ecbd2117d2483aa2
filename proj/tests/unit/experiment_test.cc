// Copyright 2026 The MPML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
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
#include <thread>

#include <gtest/gtest.h>

#include "mpml/experiment.h"

namespace mpml {
namespace {

ExperimentConfig Micro(Algo algo = Algo::kCholesky) {
  ExperimentConfig cfg;
  cfg.algo = algo;
  cfg.params = FixedPointParams::WithPrecision(28);
  SynthSpec s;
  s.d = 3;
  s.cond = 2;
  s.task = IsSolver(algo) ? "spd" : "linear";
  s.n = IsSolver(algo) ? 0 : 40;
  cfg.synthetic = s;
  cfg.iterations = 3;
  cfg.sgd.batch = 8;
  cfg.sgd.epochs = 1;
  cfg.Validate();
  return cfg;
}

std::string Row(const ExperimentResult& r) {
  return MaskTimings(ToCsvRow(r) + "\n");
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Experiment, GoldenMicroRuns) {
  const char* dir = std::getenv("MPML_GOLDEN_DIR");
  ASSERT_NE(dir, nullptr);
  std::string text = ResultsHeader() + "\n";
  for (Algo a : {Algo::kLdlt, Algo::kCholesky, Algo::kCgd, Algo::kSgdLinear}) {
    auto results = RunExperiment(Micro(a));
    text += ToCsvRow(results.front()) + "\n";
  }
  text = MaskTimings(text);
  const auto path = std::filesystem::path(dir) / "micro_runs.csv";
  if (std::getenv("MPML_UPDATE_GOLDEN")) {
    std::ofstream(path) << text;
    GTEST_SKIP() << "golden file rewritten";
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  EXPECT_EQ(text, ReadFile(path));
}

TEST(Experiment, PartiesAgreeAndRepsAreDeterministic) {
  auto cfg = Micro();
  cfg.n_parties = 3;
  cfg.reps = 3;
  auto results = RunExperiment(cfg);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) {
    EXPECT_EQ(r.opened, results[0].opened);
    EXPECT_EQ(r.transcript, results[0].transcript);
    EXPECT_EQ(r.residual, results[0].residual);
  }
  EXPECT_LT(results[0].residual, 1e-6);
  cfg.reps = 1;
  EXPECT_EQ(Row(RunExperiment(cfg)[0]), Row(results[0]));
}

TEST(Experiment, TcpMatchesLoopback) {
  auto cfg = Micro(Algo::kCgd);
  auto loop = RunExperiment(cfg);
  cfg.transport = TransportKind::kTcp;
  auto tcp = RunExperiment(cfg);
  EXPECT_EQ(Row(tcp[0]), Row(loop[0]));
  EXPECT_EQ(tcp[1].bytes_sent, loop[1].bytes_sent);
}

TEST(Experiment, DistributedPartiesMatchLocalRun) {
  auto cfg = Micro(Algo::kLdlt);
  auto local = RunExperiment(cfg);
  auto eps = LocalEndpoints(2);
  std::vector<ExperimentResult> dist(2);
  std::vector<std::thread> threads;
  for (int p = 0; p < 2; ++p) {
    threads.emplace_back([&, p] {
      net::PartyConfig pc;
      pc.party_id = p;
      pc.n_parties = 2;
      pc.endpoints = eps;
      dist[p] = RunDistributedParty(cfg, pc);
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(Row(dist[0]), Row(local[0]));
  EXPECT_EQ(Row(dist[1]), Row(local[1]));
}

TEST(Experiment, FileDealerMatchesInline) {
  auto cfg = Micro(Algo::kSgdLinear);
  auto inline_run = RunExperiment(cfg);
  auto dir = std::filesystem::temp_directory_path() / "mpml_exp_files";
  std::filesystem::create_directories(dir);
  DealFiles(cfg, dir.string());
  cfg.dealer = "files:" + dir.string();
  auto files = RunExperiment(cfg);
  EXPECT_EQ(files[0].opened, inline_run[0].opened);
  EXPECT_EQ(files[0].transcript, inline_run[0].transcript);
  // Material for a different configuration is rejected before any round.
  auto other = cfg;
  other.params = FixedPointParams::WithPrecision(13);
  EXPECT_THROW(RunExperiment(other), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, PlaintextModesGiveOneResult) {
  for (Mode m : {Mode::kPlainDouble, Mode::kPlainFixed}) {
    auto cfg = Micro(Algo::kSgdLinear);
    cfg.mode = m;
    auto r = RunExperiment(cfg);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].rounds, 0u);
    EXPECT_TRUE(r[0].transcript.empty());
    EXPECT_GT(r[0].rmse, 0.0);
  }
}

TEST(Experiment, TamperAbortsWithMacError) {
  auto cfg = Micro();
  cfg.tamper = TamperSpec{1, 2, false, 1};
  EXPECT_THROW(RunExperiment(cfg), MacCheckError);
}

TEST(Experiment, TraceHasOnePointPerIteration) {
  auto cfg = Micro(Algo::kCgd);
  cfg.trace = true;
  auto r = RunExperiment(cfg)[0];
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_NEAR(r.trace.back(), r.residual, 1e-12);
}

TEST(ExperimentConfig, Validation) {
  auto bad = [](auto edit) {
    auto cfg = Micro();
    edit(cfg);
    return cfg;
  };
  EXPECT_THROW(bad([](auto& c) { c.surrogate = "wine"; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](auto& c) { c.n_parties = 1; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& c) { c.reps = 0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& c) { c.dealer = "files:"; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](auto& c) { c.algo = Algo::kSgdLinear; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](auto& c) {
                 c.synthetic->n = 40;
                 c.synthetic->task = "logistic";
                 c.algo = Algo::kSgdLogistic;
                 c.sgd.activation = Activation::Parse("exact");
               }).Validate(),
               ConfigError);
  EXPECT_NO_THROW(bad([](auto& c) { c.n_parties = 1; c.mode = Mode::kPlainDouble; })
                      .Validate());
}

TEST(ResultsCsv, ParseRoundTrip) {
  auto r = RunExperiment(Micro())[0];
  const std::string text = ResultsHeader() + "\n" + ToCsvRow(r) + "\n";
  auto rows = ParseResultsCsv(text);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("algo"), "cholesky");
  EXPECT_EQ(rows[0].at("schema_version"), "1");
  EXPECT_EQ(rows[0].at("f"), "28");
  EXPECT_EQ(rows[0].at("d"), "3");
  EXPECT_EQ(rows[0].size(), ResultColumns().size());
  EXPECT_THROW(ParseResultsCsv("algo,mode\ncgd,secure\n"), ConfigError);
  std::string masked = MaskTimings(text);
  auto mrows = ParseResultsCsv(masked);
  for (const auto& c : TimingColumns()) EXPECT_EQ(mrows[0].at(c), "-");
}

}  // namespace
}  // namespace mpml
