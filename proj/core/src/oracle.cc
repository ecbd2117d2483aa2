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

#include "mpml/oracle.h"

namespace mpml {
namespace {

template <class B>
OracleResult SolveWith(B& be, const std::vector<double>& A,
                       const std::vector<double>& b, std::size_t d,
                       const SolverConfig& cfg, bool trace) {
  using V = typename B::Value;
  MPML_ENFORCE(A.size() == d * d && b.size() == d, ConfigError,
               "oracle: matrix and right-hand side sizes differ");
  auto a_in = be.Input(0, std::span<const double>(A), A.size());
  auto b_in = be.Input(0, std::span<const double>(b), b.size());
  SMat<B> M(d, d);
  M.data = std::move(a_in);
  OracleResult out;
  CgdObserver<B> obs;
  if (trace) {
    obs = [&](int, const fxg::Vec<B>& x) {
      out.trace.push_back(be.Open(std::span<const V>(x)));
    };
  }
  auto x = Solve(be, M, b_in, cfg, obs);
  out.solution = be.Open(std::span<const V>(x));
  return out;
}

template <class B>
OracleResult SgdWith(B& be, const Dataset& train, const SgdConfig& cfg,
                     bool trace) {
  using V = typename B::Value;
  std::vector<fxg::Vec<B>> X;
  X.reserve(train.n);
  for (std::size_t i = 0; i < train.n; ++i) {
    auto row = train.Row(i);
    X.push_back(be.Input(0, std::span<const double>(row), row.size()));
  }
  auto y = be.Input(0, std::span<const double>(train.y), train.y.size());
  OracleResult out;
  SgdObserver<B> obs;
  if (trace) {
    obs = [&](std::size_t, const fxg::Vec<B>& w) {
      out.trace.push_back(be.Open(std::span<const V>(w)));
    };
  }
  auto w = SgdTrain(be, X, y, cfg, obs);
  out.solution = be.Open(std::span<const V>(w));
  return out;
}

}  // namespace

OracleResult OracleSolve(const std::vector<double>& A,
                         const std::vector<double>& b, std::size_t d,
                         const SolverConfig& cfg, NumericMode mode,
                         const FixedPointParams& params,
                         const NonlinearOptions& nl, bool trace) {
  if (mode == NumericMode::kDouble) {
    PlainDoubleBackend be(params);
    return SolveWith(be, A, b, d, cfg, trace);
  }
  PlainFixedBackend be(params, 1, nl);
  auto out = SolveWith(be, A, b, d, cfg, trace);
  out.overflow_events = be.overflow_events();
  return out;
}

OracleResult OracleSgd(const Dataset& train, const SgdConfig& cfg,
                       NumericMode mode, const FixedPointParams& params,
                       bool trace) {
  if (mode == NumericMode::kDouble) {
    PlainDoubleBackend be(params);
    return SgdWith(be, train, cfg, trace);
  }
  PlainFixedBackend be(params);
  auto out = SgdWith(be, train, cfg, trace);
  out.overflow_events = be.overflow_events();
  return out;
}

}  // namespace mpml
