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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli_options.h"
#include "plots.h"

namespace mpml::cli {
namespace {

namespace fs = std::filesystem;

TEST(Options, MapsFlagsToConfig) {
  auto cfg = ConfigFromOptions({{"algo", "cgd"},
                                {"parties", "3"},
                                {"precision", "60"},
                                {"synthetic", "d=5,n=0"},
                                {"cond", "7"},
                                {"iterations", "12"},
                                {"seed", "9"},
                                {"transport", "tcp"}});
  EXPECT_EQ(cfg.algo, Algo::kCgd);
  EXPECT_EQ(cfg.n_parties, 3);
  EXPECT_EQ(cfg.params.f, 60);
  EXPECT_EQ(cfg.params.k, 120);
  EXPECT_EQ(cfg.synthetic->d, 5u);
  EXPECT_EQ(cfg.synthetic->cond, 7.0);
  EXPECT_EQ(cfg.iterations, 12);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.transport, TransportKind::kTcp);
  EXPECT_EQ(cfg.reps, 5);

  auto sgd = ConfigFromOptions({{"algo", "sgd-logistic"},
                                {"surrogate", "mnist-binary"},
                                {"iterations", "30"},
                                {"batch", "16"},
                                {"lr", "0.05"}});
  EXPECT_EQ(sgd.sgd.activation.kind, ActivationKind::kPiecewise);
  EXPECT_EQ(sgd.sgd.iterations, 30u);
  EXPECT_EQ(sgd.sgd.batch, 16u);
  EXPECT_DOUBLE_EQ(sgd.sgd.learning_rate, 0.05);
  EXPECT_EQ(sgd.params.f, 28);

  auto t = ConfigFromOptions({{"synthetic", "d=3,n=0"},
                              {"inject-tamper", "2:5:mac"},
                              {"parties", "3"}});
  ASSERT_TRUE(t.tamper);
  EXPECT_EQ(t.tamper->party, 2);
  EXPECT_EQ(t.tamper->opening_index, 5u);
  EXPECT_TRUE(t.tamper->mac);
}

TEST(Options, RejectsBadInput) {
  EXPECT_THROW(ConfigFromOptions({{"synthetic", "d=3,n=0"}, {"colour", "red"}}),
               ConfigError);
  EXPECT_THROW(ConfigFromOptions({{"synthetic", "d=3,n=0"}, {"parties", "two"}}),
               ConfigError);
  EXPECT_THROW(ConfigFromOptions({{"d", "3"}}), ConfigError);
  EXPECT_THROW(ConfigFromOptions({{"synthetic", "d=3,n=0"}, {"algo", "qr"}}),
               ConfigError);
  EXPECT_THROW(ConfigFromOptions({}), ConfigError);
  EXPECT_THROW(ConfigFromOptions({{"synthetic", "d=3,n=0"},
                                  {"inject-tamper", "1"}}),
               ConfigError);
}

TEST(Grid, CrossProductInAxisOrder) {
  auto cells = ExpandGrid(R"({
    "base": {"algo": "ldlt", "reps": 1, "synthetic": "n=0"},
    "axes": {"d": [10, 20], "precision": [13, 28, 60]}
  })");
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].at("d"), "10");
  EXPECT_EQ(cells[0].at("precision"), "13");
  EXPECT_EQ(cells[1].at("precision"), "28");
  EXPECT_EQ(cells[3].at("d"), "20");
  EXPECT_EQ(cells[5].at("algo"), "ldlt");
  EXPECT_EQ(cells[5].at("reps"), "1");
  for (const auto& c : cells) EXPECT_NO_THROW(ConfigFromOptions(c));
  EXPECT_EQ(ExpandGrid(R"({"base": {"trace": true}})")[0].at("trace"), "true");
  EXPECT_THROW(ExpandGrid("{"), ParseError);
  EXPECT_THROW(ExpandGrid(R"({"axes": {"d": []}})"), ParseError);
  EXPECT_THROW(ExpandGrid(R"({"cells": []})"), ParseError);
  EXPECT_THROW(ExpandGrid("[1]"), ParseError);
}

TEST(ExitCodes, PerErrorKind) {
  EXPECT_EQ(ExitCodeFor(ErrorKind::kConfig), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kParse), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kRange), 2);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kConnection), 3);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kMacCheck), 4);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kPreprocessingExhausted), 5);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kProtocol), 1);
}

CsvRecord Rec(std::map<std::string, std::string> v) {
  CsvRecord r;
  for (const auto& c : ResultColumns()) r[c] = "";
  for (auto& [k, x] : v) r[k] = x;
  return r;
}

std::vector<CsvRecord> SolverRows() {
  std::vector<CsvRecord> rows;
  for (const char* algo : {"ldlt", "cholesky", "cgd"}) {
    for (int d : {10, 20, 50}) {
      for (int cond : {1, 5}) {
        rows.push_back(Rec({{"algo", algo},
                            {"mode", "secure"},
                            {"d", std::to_string(d)},
                            {"cond", std::to_string(cond)},
                            {"f", "28"},
                            {"iterations", "20"},
                            {"residual", "1e-9"},
                            {"trace", "0.1;0.01;0.001"},
                            {"online_seconds", std::to_string(0.01 * d)},
                            {"offline_seconds", "0.5"}}));
      }
    }
  }
  return rows;
}

TEST(Plots, SolverPanels) {
  auto panels = BuildPanels(SolverRows());
  std::vector<std::string> names;
  for (const auto& p : panels) names.push_back(p.file);
  EXPECT_NE(std::find(names.begin(), names.end(), "runtime_vs_dimension_f28"),
            names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "accuracy_vs_iterations_f28"),
            names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "accuracy_vs_dimension_f28"),
            names.end());
  for (const auto& p : panels) {
    EXPECT_FALSE(p.series.empty()) << p.file;
    std::string svg = RenderSvg(p);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u) << p.file;
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
  std::string csv = PanelsToCsv(panels);
  EXPECT_EQ(csv.rfind("panel,series,x,y", 0), 0u);
}

TEST(Plots, NothingToPlot) {
  EXPECT_TRUE(BuildPanels({}).empty());
  auto dir = fs::temp_directory_path() / "mpml_empty_plots";
  fs::remove_all(dir);
  auto s = WritePlots({}, dir.string());
  EXPECT_TRUE(s.files.empty());
  EXPECT_EQ(ActivationTable({}), "");
}

TEST(Plots, WritesFiles) {
  auto dir = fs::temp_directory_path() / "mpml_plots_test";
  fs::remove_all(dir);
  auto s = WritePlots(SolverRows(), dir.string());
  EXPECT_GE(s.panels, 3u);
  for (const auto& f : s.files) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_TRUE(fs::exists(dir / "plot_data.csv"));
  fs::remove_all(dir);
}

TEST(Plots, ActivationTableOrdering) {
  std::vector<CsvRecord> rows;
  for (const char* act : {"taylor:10", "piecewise", "taylor:2"}) {
    for (const char* ds : {"arcene", "mnist-binary"}) {
      rows.push_back(Rec({{"algo", "sgd-logistic"},
                          {"mode", "secure"},
                          {"activation", act},
                          {"dataset", ds},
                          {"offline_seconds", "1.5"},
                          {"online_seconds", "2.5"}}));
    }
  }
  std::string t = ActivationTable(rows);
  std::istringstream in(t);
  std::string header, l1, l2, l3;
  std::getline(in, header);
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  EXPECT_NE(header.find("arcene offline_seconds"), std::string::npos);
  EXPECT_NE(header.find("mnist-binary online_seconds"), std::string::npos);
  EXPECT_EQ(l1.rfind("piecewise", 0), 0u);
  EXPECT_EQ(l2.rfind("taylor:2", 0), 0u);
  EXPECT_EQ(l3.rfind("taylor:10", 0), 0u);
}

int RunTool(const std::string& args) {
  std::string cmd = std::string(MPML_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

TEST(Tool, ExitCodes) {
  EXPECT_EQ(RunTool("run --synthetic d=3,n=0 --precision 28 --reps 1"), 0);
  EXPECT_EQ(RunTool("run --synthetic d=3,n=0 --parties 9"), 2);
  EXPECT_EQ(RunTool("run --no-such-flag"), 2);
  EXPECT_EQ(RunTool("run --synthetic d=3,n=0 --precision 28 --reps 1 "
                    "--inject-tamper 1:0"),
            4);
  EXPECT_EQ(RunTool("run --dataset /nonexistent.csv --algo sgd-linear"), 2);
}

TEST(Tool, RunAppendsAndPlots) {
  auto dir = fs::temp_directory_path() / "mpml_tool_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto out = (dir / "results.csv").string();
  ASSERT_EQ(RunTool("run --synthetic d=4,n=0 --algo cgd --iterations 3 "
                    "--precision 28 --reps 1 --trace --out " + out),
            0);
  ASSERT_EQ(RunTool("run --synthetic d=6,n=0 --algo cgd --iterations 3 "
                    "--precision 28 --reps 1 --trace --out " + out),
            0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = ParseResultsCsv(ss.str());
  EXPECT_EQ(rows.size(), 2u);
  EXPECT_EQ(RunTool("plot " + out + " --out-dir " + (dir / "plots").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "plots" / "plot_data.csv"));
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "not,a,results,file\n";
  }
  EXPECT_EQ(RunTool("plot " + (dir / "bad.csv").string()), 2);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace mpml::cli
