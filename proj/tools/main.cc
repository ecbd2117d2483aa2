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

// mpml: run, deal, grid and plot subcommands.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "cli_options.h"
#include "plots.h"

namespace mpml::cli {
namespace {

const std::map<std::string, std::string>& FlagHelp() {
  static const std::map<std::string, std::string> help = {
      {"algo", "ldlt | cholesky | cgd | sgd-linear | sgd-logistic"},
      {"mode", "secure | plaintext-double | plaintext-fixed"},
      {"parties", "Number of parties (default 2)"},
      {"precision", "Fractional bits f (default 28)"},
      {"bits", "Significand bits k (default 2f)"},
      {"stat-sec", "Statistical security bits (default 40)"},
      {"iterations", "CGD iterations, or total SGD steps"},
      {"epochs", "SGD epochs (default 10)"},
      {"batch", "SGD batch size (default 64)"},
      {"lr", "SGD learning rate (default 0.01)"},
      {"activation", "piecewise | taylor:D | linear | exact (plaintext)"},
      {"dataset", "CSV file, target in the last column"},
      {"target-column", "Target column index of --dataset"},
      {"synthetic", "Synthetic spec, e.g. d=20,n=0,cond=5,seed=1"},
      {"surrogate", "student | auto-mpg | wine | mnist-binary | arcene"},
      {"d", "Override d of --synthetic"},
      {"n", "Override n of --synthetic"},
      {"cond", "Override cond of --synthetic"},
      {"dealer", "inline | files:DIR"},
      {"seed", "Seed for data, dealer and batch order"},
      {"reps", "Timing repetitions, median reported (default 5)"},
      {"transport", "loopback | tcp (local runs)"},
      {"train-fraction", "Train split for datasets (default 0.8)"},
      {"ridge", "Lambda added to the normal equations"},
      {"recip-iterations", "Newton iterations for reciprocal"},
      {"sqrt-iterations", "Newton iterations for inverse sqrt"},
      {"mac-interval", "MAC check every R openings, 0 for terminal only"},
      {"trace", "Record the metric after every iteration"},
      {"header", "--dataset has a header row"},
      {"no-standardize", "Do not standardize features"},
  };
  return help;
}

struct ExperimentFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::string tamper;
  bool tamper_set = false;

  void Register(CLI::App* app) {
    for (const auto& k : ValueKeys()) {
      if (k == "inject-tamper") continue;
      app->add_option("--" + k, values[k], FlagHelp().at(k));
    }
    for (const auto& k : FlagKeys()) {
      app->add_flag("--" + k, flags[k], FlagHelp().at(k));
    }
    app->add_option("--inject-tamper", tamper,
                    "Corrupt one opening: PARTY:OPENING[:mac] (default 1:0)")
        ->expected(0, 1);
  }

  Options Collect(CLI::App* app) const {
    Options o;
    for (const auto& [k, v] : values) {
      if (app->count("--" + k) > 0) o[k] = v;
    }
    for (const auto& [k, v] : flags) {
      if (v) o[k] = "true";
    }
    if (app->count("--inject-tamper") > 0) o["inject-tamper"] = tamper;
    return o;
  }
};

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void LogResult(const ExperimentResult& r) {
  spdlog::info(
      "{} {} parties={} f={} residual={:.3e} rmse={:.4f} accuracy={:.4f} "
      "rounds={} bytes={} triples={} offline={:.3f}s online={:.3f}s",
      AlgoName(r.config.algo), ModeName(r.config.mode), r.config.n_parties,
      r.config.params.f, r.residual, r.rmse, r.accuracy, r.rounds,
      r.bytes_sent, r.triples, r.offline_seconds, r.online_seconds);
}

std::vector<std::string> RunLocalCell(const ExperimentConfig& cfg) {
  auto results = RunExperiment(cfg);
  CheckPartiesAgree(results);
  LogResult(results.front());
  return {ToCsvRow(results.front())};
}

int Run(const Options& opts, int party_id, const std::string& endpoints,
        const std::string& session, const std::string& out) {
  ExperimentConfig cfg = ConfigFromOptions(opts);
  std::vector<std::string> rows;
  if (party_id >= 0) {
    net::PartyConfig pc;
    pc.party_id = party_id;
    pc.n_parties = cfg.n_parties;
    pc.endpoints = SplitList(endpoints);
    pc.session_id = session;
    pc.Validate(true);
    MPML_ENFORCE(cfg.reps == 1 || opts.count("reps") == 0, ConfigError,
                 "--reps applies to local runs only");
    auto r = RunDistributedParty(cfg, pc);
    LogResult(r);
    rows.push_back(ToCsvRow(r));
  } else {
    rows = RunLocalCell(cfg);
  }
  for (const auto& r : rows) std::cout << r << '\n';
  if (!out.empty()) AppendResults(out, rows);
  return kExitOk;
}

int Grid(const std::string& grid_path, const Options& overrides,
         const std::string& out) {
  std::ifstream f(grid_path);
  MPML_ENFORCE(f.good(), ConfigError, "cannot read " + grid_path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto cells = ExpandGrid(ss.str());
  // Validate every cell before running any.
  std::vector<ExperimentConfig> configs;
  for (auto cell : cells) {
    for (const auto& [k, v] : overrides) cell[k] = v;
    configs.push_back(ConfigFromOptions(cell));
  }
  spdlog::info("grid: {} cells", configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    spdlog::info("cell {}/{}: {}", i + 1, configs.size(),
                 configs[i].Descriptor());
    auto rows = RunLocalCell(configs[i]);
    if (!out.empty()) {
      AppendResults(out, rows);
    } else {
      for (const auto& r : rows) std::cout << r << '\n';
    }
  }
  return kExitOk;
}

int Deal(const Options& opts, const std::string& dir) {
  ExperimentConfig cfg = ConfigFromOptions(opts);
  const Cost c = EstimateCost(cfg);
  const double secs = DealFiles(cfg, dir);
  spdlog::info("wrote material for {} parties to {} in {:.3f}s: {}",
               cfg.n_parties, dir, secs, c.ToString());
  std::cout << c.ToString() << '\n';
  return kExitOk;
}

int Export(const Options& opts, const std::string& train_path,
           const std::string& test_path) {
  ExperimentConfig cfg = ConfigFromOptions(opts);
  PreparedInput in = PrepareInput(cfg);
  MPML_ENFORCE(!in.system, ConfigError,
               "export writes datasets; a linear system has no rows");
  SaveCsv(in.train, train_path);
  if (!test_path.empty()) SaveCsv(in.test, test_path);
  return kExitOk;
}

int Plot(const std::string& results, const std::string& dir) {
  std::ifstream f(results);
  MPML_ENFORCE(f.good(), ConfigError, "cannot read " + results);
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = ParseResultsCsv(ss.str());
  if (rows.empty()) {
    spdlog::warn("{}: no result rows, nothing to plot", results);
    return kExitOk;
  }
  auto summary = WritePlots(rows, dir);
  if (summary.files.empty()) {
    spdlog::warn("{}: no rows match any plot", results);
  }
  for (const auto& p : summary.files) std::cout << p << '\n';
  return kExitOk;
}

}  // namespace
}  // namespace mpml::cli

int main(int argc, char** argv) {
  using namespace mpml;
  using namespace mpml::cli;
  auto logger = spdlog::stderr_color_mt("mpml");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();  // SPDLOG_LEVEL=info, debug, ...

  CLI::App app{"Secure fixed-point linear algebra and SGD over SPDZ shares"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment cell");
  ExperimentFlags run_flags;
  run_flags.Register(run);
  int party_id = -1;
  std::string endpoints, out, session = "mpml";
  bool local = false;
  run->add_option("--party-id", party_id,
                  "This process's party (distributed run over TCP)");
  run->add_option("--endpoints", endpoints, "host:port per party, comma list");
  run->add_option("--session-id", session, "Session identifier");
  run->add_flag("--local", local, "Run all parties in this process");
  run->add_option("--out", out, "Append result rows to this CSV");

  auto* grid = app.add_subcommand("grid", "Run every cell of a grid file");
  ExperimentFlags grid_flags;
  grid_flags.Register(grid);
  std::string grid_path, grid_out;
  grid->add_option("grid", grid_path, "Grid JSON file")->required();
  grid->add_option("--out", grid_out, "Append result rows to this CSV");

  auto* deal = app.add_subcommand("deal", "Write preprocessing files");
  ExperimentFlags deal_flags;
  deal_flags.Register(deal);
  std::string deal_dir;
  deal->add_option("--dir", deal_dir, "Output directory")->required();

  auto* exp = app.add_subcommand(
      "export", "Write the prepared train/test split as CSV (target last)");
  ExperimentFlags exp_flags;
  exp_flags.Register(exp);
  std::string exp_train, exp_test;
  exp->add_option("--train", exp_train, "Training rows")->required();
  exp->add_option("--test", exp_test, "Test rows");

  auto* plot = app.add_subcommand("plot", "Plot a results file as SVG");
  std::string plot_in, plot_dir = "plots";
  plot->add_option("results", plot_in, "Results CSV")->required();
  plot->add_option("--out-dir", plot_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      if (local && party_id >= 0) {
        throw ConfigError("--local and --party-id are exclusive");
      }
      return Run(run_flags.Collect(run), party_id, endpoints, session, out);
    }
    if (grid->parsed()) {
      return Grid(grid_path, grid_flags.Collect(grid), grid_out);
    }
    if (deal->parsed()) return Deal(deal_flags.Collect(deal), deal_dir);
    if (exp->parsed()) {
      return Export(exp_flags.Collect(exp), exp_train, exp_test);
    }
    if (plot->parsed()) return Plot(plot_in, plot_dir);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitOther;
  }
  return kExitOther;
}
