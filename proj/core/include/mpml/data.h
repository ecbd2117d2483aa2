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

// Datasets: seeded synthetic generators, CSV input/output, standardization,
// splitting and column partitioning across parties.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mpml/prg.h"
#include "mpml/sgd.h"

namespace mpml {

struct Dataset {
  std::string name;
  Task task = Task::kRegression;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> X;  // row-major n x d
  std::vector<double> y;

  double x(std::size_t i, std::size_t j) const { return X[i * d + j]; }
  std::vector<double> Row(std::size_t i) const {
    return {X.begin() + i * d, X.begin() + (i + 1) * d};
  }
  // Columns [begin, end) of every row.
  Dataset Columns(std::size_t begin, std::size_t end) const;
  Dataset Subset(const std::vector<std::size_t>& rows) const;
};

// "d=50,n=1000,cond=5,seed=7". n=0 requests a linear system rather than a
// dataset.
struct SynthSpec {
  std::size_t d = 10;
  std::size_t n = 1000;
  double cond = 1.0;
  double noise_sd = 0.1;
  std::string task = "linear";  // linear | logistic | spd
  uint64_t seed = 1;
  // Scale of the true weights and number of non-zero ones (0 = all).
  double signal = 1.0;
  std::size_t informative = 0;

  static SynthSpec Parse(const std::string& text);
  void Validate() const;
  std::string ToString() const;
  bool is_system() const { return task == "spd" || n == 0; }
};

struct LinearSystem {
  std::size_t d = 0;
  std::vector<double> A;  // row-major d x d
  std::vector<double> b;
  std::vector<double> x_true;
  // Eigenvalues of A span [lambda_min, lambda_max].
  double lambda_min = 1.0;
  double lambda_max = 1.0;
};

// Normal variates by Box-Muller over the ChaCha stream.
class GaussianSource {
 public:
  explicit GaussianSource(Prg prg) : prg_(std::move(prg)) {}
  double Next();
  double Uniform() { return prg_.NextDouble(); }
  Prg& prg() { return prg_; }

 private:
  Prg prg_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// A = Q diag(sigma) Q^T with Q Haar-random and sigma geometric on [1, cond].
LinearSystem GenSpdSystem(const SynthSpec& spec);
// X with singular values geometric on [1/cond, 1] times sqrt(n), so columns
// have unit scale; y = X w + noise (linear) or Bernoulli(logistic(X w)).
Dataset GenRegression(const SynthSpec& spec);
Dataset GenLogistic(const SynthSpec& spec);
Dataset GenDataset(const SynthSpec& spec);

// Synthetic stand-ins shaped like public datasets: "student" (395 x 30),
// "auto-mpg" (392 x 7), "wine" (1599 x 11), "mnist-binary" (d = 50) and
// "arcene" (d = 1000, sparse signal).
Dataset MakeSurrogate(const std::string& name, uint64_t seed);
std::vector<std::string> SurrogateNames();

struct CsvOptions {
  bool header = false;
  int target_column = -1;  // -1: last column
  Task task = Task::kRegression;
};

Dataset LoadCsv(const std::string& path, const CsvOptions& options);
Dataset ParseCsv(const std::string& text, const CsvOptions& options,
                 const std::string& name = "csv");
// Features then target, 17 significant digits.
std::string ToCsv(const Dataset& ds);
void SaveCsv(const Dataset& ds, const std::string& path);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;
  bool target = false;
  double y_mean = 0.0;
  double y_sd = 1.0;
};

// Column statistics (population standard deviation; constant columns keep
// unit scale). The target is included for regression when requested.
Standardizer FitStandardizer(const Dataset& ds, bool target);
void ApplyStandardizer(Dataset& ds, const Standardizer& st);
void Standardize(Dataset& ds, bool target);

// Seeded shuffle, first floor(n * train_fraction) rows for training.
std::pair<Dataset, Dataset> Split(const Dataset& ds, double train_fraction,
                                  uint64_t seed);

// Contiguous column blocks [begin, end), sizes differ by at most one and the
// larger blocks come first.
std::vector<std::pair<std::size_t, std::size_t>> VPartition(
    std::size_t d, int n_parties);

// Owner of column j under VPartition.
int ColumnOwner(std::size_t j, std::size_t d, int n_parties);

}  // namespace mpml
