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

// Plaintext reference runs of the solver and SGD templates, in double
// precision or in simulated fixed point. They execute the same generic code
// as the secure path.

#pragma once

#include <cstdint>
#include <vector>

#include "mpml/data.h"
#include "mpml/plain_backend.h"
#include "mpml/sgd.h"
#include "mpml/solvers.h"

namespace mpml {

enum class NumericMode { kDouble, kFixed };

struct OracleResult {
  std::vector<double> solution;  // x or weights
  // CGD: x after each iteration. SGD: weights after each step.
  std::vector<std::vector<double>> trace;
  uint64_t overflow_events = 0;  // fixed mode only
};

// A is row-major d x d. Double mode reports a singular pivot as
// NumericalError.
OracleResult OracleSolve(const std::vector<double>& A,
                         const std::vector<double>& b, std::size_t d,
                         const SolverConfig& cfg, NumericMode mode,
                         const FixedPointParams& params = {},
                         const NonlinearOptions& nl = {}, bool trace = false);

OracleResult OracleSgd(const Dataset& train, const SgdConfig& cfg,
                       NumericMode mode, const FixedPointParams& params = {},
                       bool trace = false);

}  // namespace mpml
