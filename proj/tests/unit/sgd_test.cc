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
#include <set>

#include <gtest/gtest.h>

#include "mpml/data.h"
#include "mpml/plain_backend.h"
#include "mpml/sgd.h"
#include "test_util.h"

namespace mpml {
namespace {

using testing::RunSecure1;

const FixedPointParams kF13 = FixedPointParams::WithPrecision(13);
const FixedPointParams kF28 = FixedPointParams::WithPrecision(28);

TEST(SgdStep, SingleExampleByHand) {
  // w = 0, x = 1, y = 1, lr = 0.1: residual -1, update w = 0.1.
  auto out = RunSecure1(2, kF13, [](SecureBackend& b) {
    auto x = b.Input(0, std::vector<double>{1.0}, 1);
    auto y = b.Input(1, std::vector<double>{1.0}, 1);
    std::vector<AuthShare> w = {b.Zero()};
    return b.Open(SgdStep(b, w, {x}, y, 0.1, Activation{}));
  });
  EXPECT_NEAR(out[0], 0.1, 2 * kF13.ulp());
}

TEST(SgdStep, StationaryAtExactFit) {
  // y = 2 x1 - x2 exactly; the gradient at the true weights vanishes.
  std::vector<std::vector<double>> X = {{1, 0}, {0, 1}, {1, 1}, {0.5, -1}};
  std::vector<double> y = {2, -1, 1, 2};
  PlainDoubleBackend pb;
  auto w = SgdStep(pb, {2.0, -1.0}, X, y, 0.5, Activation{});
  EXPECT_DOUBLE_EQ(w[0], 2.0);
  EXPECT_DOUBLE_EQ(w[1], -1.0);
}

TEST(SgdStep, SecureMatchesDoubleWithinTruncationBound) {
  SynthSpec s;
  s.d = 6;
  s.n = 32;
  s.seed = 3;
  Dataset ds = GenRegression(s);
  const std::vector<double> w0 = {0.1, -0.2, 0.3, 0.05, 0, 0.4};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < ds.n; ++i) rows.push_back(ds.Row(i));
  PlainDoubleBackend pb;
  auto expect = SgdStep(pb, w0, rows, ds.y, 0.05, Activation{});
  for (const auto& params : {kF13, kF28}) {
    auto got = RunSecure1(3, params, [&](SecureBackend& b) {
      auto w = b.Input(0, w0, w0.size());
      std::vector<std::vector<AuthShare>> xr;
      for (const auto& r : rows) xr.push_back(b.Input(1, r, r.size()));
      auto y = b.Input(2, ds.y, ds.n);
      return b.Open(SgdStep(b, w, xr, y, 0.05, Activation{}));
    });
    // Encoding of the inputs plus one truncation per inner product and one
    // for the scaled update.
    const double tol = (s.d + 2) * std::ldexp(1.0, -params.f) * 4;
    EXPECT_LT(testing::MaxAbsDiff(got, expect), tol) << params.f;
  }
}

TEST(SgdTrain, DeterministicAndObserved) {
  SynthSpec s;
  s.d = 4;
  s.n = 100;
  Dataset ds = GenRegression(s);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < ds.n; ++i) rows.push_back(ds.Row(i));
  SgdConfig cfg;
  cfg.batch = 10;
  cfg.epochs = 3;
  cfg.learning_rate = 0.1;
  std::size_t calls = 0;
  PlainDoubleBackend pb;
  auto w1 = SgdTrain(pb, rows, ds.y, cfg,
                     [&](std::size_t, const std::vector<double>&) { ++calls; });
  auto w2 = SgdTrain(pb, rows, ds.y, cfg);
  EXPECT_EQ(calls, 30u);
  EXPECT_EQ(w1, w2);
  cfg.shuffle_seed = 99;
  EXPECT_NE(SgdTrain(pb, rows, ds.y, cfg), w1);
}

TEST(BatchSchedule, EpochsArePermutations) {
  SgdConfig cfg;
  cfg.batch = 7;
  cfg.epochs = 2;
  auto sched = BatchSchedule(30, cfg);
  ASSERT_EQ(sched.size(), 8u);  // floor(30/7) = 4 per epoch
  for (int e = 0; e < 2; ++e) {
    std::set<std::size_t> seen;
    for (int b = 0; b < 4; ++b) {
      ASSERT_EQ(sched[e * 4 + b].size(), 7u);
      for (auto i : sched[e * 4 + b]) {
        EXPECT_LT(i, 30u);
        EXPECT_TRUE(seen.insert(i).second);
      }
    }
  }
  EXPECT_NE(sched[0], sched[4]);
  cfg.iterations = 5;
  EXPECT_EQ(BatchSchedule(30, cfg).size(), 5u);
  EXPECT_EQ(cfg.Steps(30), 5u);
}

TEST(SgdConfig, Validation) {
  SgdConfig cfg;
  cfg.batch = 0;
  EXPECT_THROW(cfg.Validate(10), ConfigError);
  cfg.batch = 11;
  EXPECT_THROW(cfg.Validate(10), ConfigError);
  cfg.batch = 5;
  cfg.learning_rate = 0;
  EXPECT_THROW(cfg.Validate(10), ConfigError);
}

TEST(Activation, ParseAndName) {
  EXPECT_EQ(Activation::Parse("linear").kind, ActivationKind::kLinear);
  EXPECT_EQ(Activation::Parse("piecewise").kind, ActivationKind::kPiecewise);
  EXPECT_EQ(Activation::Parse("exact").kind, ActivationKind::kExact);
  Activation t = Activation::Parse("taylor:7");
  EXPECT_EQ(t.kind, ActivationKind::kTaylor);
  EXPECT_EQ(t.degree, 7);
  for (const char* s : {"linear", "piecewise", "exact", "taylor:2", "taylor:10"}) {
    EXPECT_EQ(Activation::Parse(s).Name(), s);
  }
  EXPECT_THROW(Activation::Parse("taylor:3"), ConfigError);
  EXPECT_THROW(Activation::Parse("relu"), ConfigError);
  EXPECT_THROW(Activation::Parse("taylor:x"), ConfigError);
}

TEST(Activation, ExactIsPlaintextOnly) {
  EXPECT_THROW(RunSecure1(2, kF13,
                          [](SecureBackend& b) {
                            auto u = b.Input(0, std::vector<double>{0.0}, 1);
                            return b.Open(ApplyActivation(
                                b, std::span<const AuthShare>(u),
                                Activation{ActivationKind::kExact, 0}));
                          }),
               ConfigError);
  PlainDoubleBackend pb;
  std::vector<double> u = {0.0};
  EXPECT_DOUBLE_EQ(ApplyActivation(pb, std::span<const double>(u),
                                   Activation{ActivationKind::kExact, 0})[0],
                   0.5);
}

TEST(Evaluate, RegressionAndClassification) {
  std::vector<double> pred = {1, 2, 3}, y = {1, 2, 5};
  EXPECT_NEAR(EvaluatePredictions(pred, y, Task::kRegression).rmse,
              std::sqrt(4.0 / 3), 1e-12);
  std::vector<double> p = {0.9, 0.2, 0.5, 0.4}, c = {1, 0, 1, 1};
  EXPECT_DOUBLE_EQ(EvaluatePredictions(p, c, Task::kClassification).accuracy,
                   0.75);
  // X w with w = (1, -1) on two rows
  std::vector<double> X = {2, 1, 0, 3};
  std::vector<double> w = {1, -1}, yc = {1, 0};
  EXPECT_DOUBLE_EQ(Evaluate(w, X, 2, yc, Task::kClassification).accuracy, 1.0);
}

}  // namespace
}  // namespace mpml
