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

#include <cmath>

#include <gtest/gtest.h>

#include "mpml/oracle.h"
#include "test_util.h"

namespace mpml {
namespace {

using testing::MaxAbsDiff;
using testing::RunSecure1;

const FixedPointParams kF28 = FixedPointParams::WithPrecision(28);

LinearSystem System(std::size_t d, double cond, uint64_t seed = 2) {
  SynthSpec s;
  s.d = d;
  s.cond = cond;
  s.task = "spd";
  s.seed = seed;
  return GenSpdSystem(s);
}

double RelResidual(const LinearSystem& sys, const std::vector<double>& x) {
  double rn = 0, bn = 0;
  for (std::size_t i = 0; i < sys.d; ++i) {
    double r = -sys.b[i];
    for (std::size_t j = 0; j < sys.d; ++j) r += sys.A[i * sys.d + j] * x[j];
    rn += r * r;
    bn += sys.b[i] * sys.b[i];
  }
  return std::sqrt(rn / bn);
}

TEST(OracleSolve, DoubleCgdConvergesWithinDimensionSteps) {
  for (std::size_t d : {3u, 8u, 15u}) {
    auto sys = System(d, 10);
    auto r = OracleSolve(sys.A, sys.b, d,
                         SolverConfig{SolverMethod::kCgd, static_cast<int>(d)},
                         NumericMode::kDouble, {}, {}, true);
    ASSERT_EQ(r.trace.size(), d);
    EXPECT_LT(RelResidual(sys, r.solution), 1e-9) << d;
    EXPECT_GT(RelResidual(sys, r.trace.front()), 1e-6) << d;
  }
}

TEST(OracleSolve, DirectMethodsAgreeInDouble) {
  auto sys = System(10, 5);
  auto l = OracleSolve(sys.A, sys.b, 10, {SolverMethod::kLdlt, 0},
                       NumericMode::kDouble);
  auto c = OracleSolve(sys.A, sys.b, 10, {SolverMethod::kCholesky, 0},
                       NumericMode::kDouble);
  EXPECT_LT(MaxAbsDiff(l.solution, sys.x_true), 1e-12);
  EXPECT_LT(MaxAbsDiff(c.solution, sys.x_true), 1e-12);
}

TEST(OracleSolve, SingularPivotIsNumericalError) {
  EXPECT_THROW(OracleSolve({0, 1, 1, 0}, {1, 1}, 2, {SolverMethod::kLdlt, 0},
                           NumericMode::kDouble),
               NumericalError);
}

TEST(OracleSolve, FixedModeTracksSecureRun) {
  for (auto m : {SolverMethod::kLdlt, SolverMethod::kCholesky,
                 SolverMethod::kCgd}) {
    auto sys = System(6, 5, 21);
    SolverConfig sc{m, 8};
    auto fixed =
        OracleSolve(sys.A, sys.b, sys.d, sc, NumericMode::kFixed, kF28);
    auto dbl = OracleSolve(sys.A, sys.b, sys.d, sc, NumericMode::kDouble);
    auto sec = RunSecure1(2, kF28, [&](SecureBackend& b) {
      SMat<SecureBackend> A(sys.d, sys.d);
      A.data = b.Input(0, sys.A, sys.A.size());
      auto rhs = b.Input(1, sys.b, sys.d);
      return b.Open(Solve(b, A, rhs, sc));
    });
    EXPECT_EQ(fixed.overflow_events, 0u);
    // Both differ from double only by accumulated rounding at 2^-28.
    EXPECT_LT(MaxAbsDiff(fixed.solution, dbl.solution), 1e-5)
        << SolverMethodName(m);
    EXPECT_LT(MaxAbsDiff(sec, fixed.solution), 1e-5) << SolverMethodName(m);
  }
}

TEST(OracleSolve, NormalEquationsMatchConjugateGradients) {
  SynthSpec s;
  s.d = 6;
  s.n = 80;
  s.cond = 4;
  Dataset ds = GenRegression(s);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < ds.n; ++i) rows.push_back(ds.Row(i));
  PlainDoubleBackend pb;
  auto [A, rhs] = NormalEquations(pb, rows, ds.y, 1e-3);
  auto direct = OracleSolve(A.data, rhs, s.d, {SolverMethod::kCholesky, 0},
                            NumericMode::kDouble);
  auto cg = OracleSolve(A.data, rhs, s.d, {SolverMethod::kCgd, 12},
                        NumericMode::kDouble);
  EXPECT_LT(MaxAbsDiff(direct.solution, cg.solution), 1e-8);
}

TEST(OracleSgd, FixedModeTracksSecureRun) {
  SynthSpec s;
  s.d = 4;
  s.n = 64;
  s.seed = 6;
  Dataset ds = GenRegression(s);
  SgdConfig cfg;
  cfg.batch = 16;
  cfg.epochs = 2;
  cfg.learning_rate = 0.1;
  auto fixed = OracleSgd(ds, cfg, NumericMode::kFixed, kF28, true);
  auto dbl = OracleSgd(ds, cfg, NumericMode::kDouble);
  ASSERT_EQ(fixed.trace.size(), 8u);
  auto sec = RunSecure1(3, kF28, [&](SecureBackend& b) {
    std::vector<std::vector<AuthShare>> X;
    for (std::size_t i = 0; i < ds.n; ++i) {
      X.push_back(b.Input(0, ds.Row(i), ds.d));
    }
    auto y = b.Input(2, ds.y, ds.n);
    return b.Open(SgdTrain(b, X, y, cfg));
  });
  const double steps = 8;
  const double bound = steps * (s.d + 2) * kF28.ulp();
  EXPECT_LT(MaxAbsDiff(sec, fixed.solution), bound);
  // Double arithmetic is not bound by the truncation analysis, only close.
  EXPECT_LT(MaxAbsDiff(dbl.solution, fixed.solution), 1e-6);
}

}  // namespace
}  // namespace mpml
