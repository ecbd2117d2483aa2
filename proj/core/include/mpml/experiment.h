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

// One experiment cell: data preparation, the party program (identical for
// the secure, plaintext and counting backends), metrics and result rows.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpml/cost_model.h"
#include "mpml/data.h"
#include "mpml/engine.h"
#include "mpml/runner.h"
#include "mpml/secure_fixed.h"
#include "mpml/sgd.h"
#include "mpml/solvers.h"

namespace mpml {

enum class Algo { kLdlt, kCholesky, kCgd, kSgdLinear, kSgdLogistic };
enum class Mode { kSecure, kPlainDouble, kPlainFixed };

Algo ParseAlgo(const std::string& name);
const char* AlgoName(Algo a);
Mode ParseMode(const std::string& name);
const char* ModeName(Mode m);
bool IsSolver(Algo a);

struct ExperimentConfig {
  Algo algo = Algo::kCholesky;
  Mode mode = Mode::kSecure;
  int n_parties = 2;
  FixedPointParams params;

  // Data: exactly one of synthetic / surrogate / dataset_path.
  std::optional<SynthSpec> synthetic;
  std::string surrogate;
  std::string dataset_path;
  CsvOptions csv;
  double train_fraction = 0.8;
  bool standardize = true;

  int iterations = 20;  // CGD iterations
  NonlinearOptions nonlinear;
  double ridge = 1.0 / 1024.0;  // normal-equation lambda
  SgdConfig sgd;

  uint64_t seed = 1;  // dealer, split and MAC-check coins
  TransportKind transport = TransportKind::kLoopback;
  std::string dealer = "inline";  // inline | files:DIR
  uint64_t mac_check_interval = 10000;
  std::optional<TamperSpec> tamper;
  bool trace = false;
  int reps = 1;

  void Validate() const;
  // Stable text used in the handshake digest and the CSV config echo.
  std::string Descriptor() const;
  std::string DataLabel() const;
};

// Everything the party program reads. Owners only use their own columns.
struct PreparedInput {
  bool system = false;
  std::size_t d = 0;
  // System: A is d x d, b the right-hand side. Dataset: training rows.
  LinearSystem sys;
  Dataset train;
  Dataset test;
  SystemBounds bounds;
};

PreparedInput PrepareInput(const ExperimentConfig& cfg);

struct ProgramOutput {
  std::vector<double> opened;               // solution or weights
  std::vector<std::vector<double>> trace;   // per iteration / epoch
};

// Column owner for party-partitioned inputs; the target belongs to the last
// party.
int InputOwner(std::size_t column, std::size_t d, int n_parties);

template <class B>
ProgramOutput RunProgram(B& b, const ExperimentConfig& cfg,
                         const PreparedInput& in, int party);

struct ExperimentResult {
  ExperimentConfig config;
  int party = 0;
  double offline_seconds = 0.0;
  double online_seconds = 0.0;
  uint64_t rounds = 0;
  uint64_t bytes_sent = 0;
  uint64_t triples = 0;
  uint64_t trunc_pairs = 0;
  uint64_t bits = 0;
  uint64_t masks = 0;
  uint64_t mac_checks = 0;
  std::size_t d = 0;
  std::size_t n = 0;      // examples, 0 for a linear system
  std::size_t steps = 0;  // SGD steps or CGD iterations
  // Solvers: relative residual |Ax - b| / |b| and relative error against
  // the generating solution. SGD: RMSE and accuracy on the test split.
  double residual = 0.0;
  double rel_error = 0.0;
  double rmse = 0.0;
  double accuracy = 0.0;
  std::vector<double> trace;  // residual or accuracy per trace point
  std::vector<double> opened;
  std::string transcript;  // hex, secure mode only
};

// Metrics of an opened output against the prepared data.
void ComputeMetrics(const ExperimentConfig& cfg, const PreparedInput& in,
                    const ProgramOutput& out, ExperimentResult& r);

// Local run of all parties (secure) or a plaintext run. Returns one result
// per party (secure) or a single result (plaintext); timing is the median
// over cfg.reps repetitions.
std::vector<ExperimentResult> RunExperiment(const ExperimentConfig& cfg);

// One party of a distributed run over TCP.
ExperimentResult RunDistributedParty(const ExperimentConfig& cfg,
                                     const net::PartyConfig& party);

// Preprocessing needed by one run, from the counting backend.
Cost EstimateCost(const ExperimentConfig& cfg, const PreparedInput& in);
Cost EstimateCost(const ExperimentConfig& cfg);

// Writes "<dir>/material.p<i>.bin" for every party; returns generation time.
double DealFiles(const ExperimentConfig& cfg, const std::string& dir);

// ----------------------------------------------------------- results CSV

inline constexpr int kResultsSchemaVersion = 1;
const std::vector<std::string>& ResultColumns();
// Columns holding wall-clock measurements.
const std::vector<std::string>& TimingColumns();
std::string ResultsHeader();
std::string ToCsvRow(const ExperimentResult& r);

using CsvRecord = std::map<std::string, std::string>;
// Parses a results file; ConfigError when the header does not match the
// current schema.
std::vector<CsvRecord> ParseResultsCsv(const std::string& text);
// Replaces timing columns by "-".
std::string MaskTimings(const std::string& csv);

}  // namespace mpml
