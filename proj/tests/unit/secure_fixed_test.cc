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
#include <random>

#include <gtest/gtest.h>

#include "mpml/errors.h"
#include "mpml/plain_backend.h"
#include "test_util.h"

namespace mpml {
namespace {

using testing::RunSecure1;
using V = AuthShare;

const FixedPointParams kF13 = FixedPointParams::WithPrecision(13);
const FixedPointParams kF28 = FixedPointParams::WithPrecision(28);

std::span<const V> S(const std::vector<V>& v) { return v; }

TEST(SecureFixed, ProductOfEncodedValues) {
  auto out = RunSecure1(2, kF13, [](SecureBackend& b) {
    auto x = b.Input(0, std::vector<double>{2.5, -1.25, 0.0}, 3);
    auto y = b.Input(1, std::vector<double>{2.0, 4.0, 7.0}, 3);
    return b.Open(fxg::Mul(b, S(x), S(y)));
  });
  EXPECT_NEAR(out[0], 5.0, kF13.ulp());
  EXPECT_NEAR(out[1], -5.0, kF13.ulp());
  EXPECT_NEAR(out[2], 0.0, kF13.ulp());
}

TEST(SecureFixed, LessThanZero) {
  auto out = RunSecure1(3, kF13, [](SecureBackend& b) {
    auto x = b.Input(2, std::vector<double>{-0.25, 0.0, 0.25, -100.0, 100.0,
                                            -kF13.ulp()},
                     6);
    auto bits = b.Ltz(x);
    std::vector<double> r;
    for (double v : b.Open(bits)) r.push_back(v * std::ldexp(1.0, kF13.f));
    return r;
  });
  EXPECT_EQ(out, (std::vector<double>{1, 0, 0, 1, 0, 1}));
}

TEST(SecureFixed, NormalizeSplitsMantissaAndExponent) {
  auto out = RunSecure1(2, kF13, [](SecureBackend& b) {
    auto x = b.Input(0, std::vector<double>{6.0, 0.5, 0.125}, 3);
    auto n = fxg::Normalize(b, S(x));
    auto m = b.Open(n.x_norm);
    auto e = b.Open(n.exponent);
    std::vector<double> r = m;
    for (double v : e) r.push_back(v * std::ldexp(1.0, kF13.f));
    return r;
  });
  EXPECT_NEAR(out[0], 0.75, kF13.ulp());
  EXPECT_NEAR(out[1], 0.5, kF13.ulp());
  EXPECT_NEAR(out[2], 0.5, kF13.ulp());
  EXPECT_EQ(out[3], 3);
  EXPECT_EQ(out[4], 0);
  EXPECT_EQ(out[5], -2);
}

TEST(SecureFixed, SquareRootAndReciprocal) {
  const std::vector<double> xs = {2.0, 0.01, 1.0, 12.5, 99.0};
  auto out = RunSecure1(2, kF28, [&](SecureBackend& b) {
    auto x = b.Input(0, xs, xs.size());
    auto sr = b.SqrtInvSqrt(x);
    auto r = b.Reciprocal(x);
    auto a = b.Open(sr.sqrt);
    auto c = b.Open(sr.inv_sqrt);
    auto d = b.Open(r);
    a.insert(a.end(), c.begin(), c.end());
    a.insert(a.end(), d.begin(), d.end());
    return a;
  });
  const std::size_t m = xs.size();
  EXPECT_NEAR(out[0], std::sqrt(2.0), std::ldexp(1.0, -24));
  const double tol = std::ldexp(1.0, -(kF28.f - 4));
  for (std::size_t i = 0; i < m; ++i) {
    // Against the encoded input.
    const double x = std::ldexp(std::round(std::ldexp(xs[i], kF28.f)), -kF28.f);
    EXPECT_NEAR(out[i] / std::sqrt(x), 1.0, tol) << xs[i];
    EXPECT_NEAR(out[m + i] * std::sqrt(x), 1.0, tol) << xs[i];
    // A reciprocal below 1/16 cannot be relatively this close in f bits.
    if (x <= 16) {
      EXPECT_NEAR(out[2 * m + i] * x, 1.0, tol) << xs[i];
    } else {
      EXPECT_NEAR(out[2 * m + i], 1.0 / x, 2 * kF28.ulp()) << xs[i];
    }
  }
}

TEST(SecureFixed, PiecewiseActivation) {
  auto out = RunSecure1(2, kF13, [](SecureBackend& b) {
    auto u = b.Input(0, std::vector<double>{0.0, -1.0, 2.0, 0.25, -0.5}, 5);
    return b.Open(fxg::Piecewise(b, S(u)));
  });
  EXPECT_NEAR(out[0], 0.5, kF13.ulp());
  EXPECT_EQ(out[1], 0.0);
  EXPECT_EQ(out[2], 1.0);
  EXPECT_NEAR(out[3], 0.75, kF13.ulp());
  EXPECT_NEAR(out[4], 0.0, kF13.ulp());
}

TEST(SecureFixed, TaylorActivation) {
  auto out = RunSecure1(2, kF28, [](SecureBackend& b) {
    auto u = b.Input(0, std::vector<double>{1.0, 0.0, -1.0}, 3);
    auto t2 = b.Open(fxg::TaylorLogistic(b, S(u), 2));
    auto t10 = b.Open(fxg::TaylorLogistic(b, S(u), 10));
    t2.insert(t2.end(), t10.begin(), t10.end());
    return t2;
  });
  EXPECT_NEAR(out[0], 0.75, 4 * kF28.ulp());
  EXPECT_NEAR(out[1], 0.5, 4 * kF28.ulp());
  EXPECT_NEAR(out[2], 0.25, 4 * kF28.ulp());
  for (int i = 0; i < 3; ++i) {
    const double u = 1.0 - i;
    EXPECT_NEAR(out[3 + i], 1.0 / (1.0 + std::exp(-u)), 1e-4);
  }
}

TEST(SecureFixed, TaylorRejectsUnsupportedDegree) {
  EXPECT_THROW(RunSecure1(2, kF13,
                          [](SecureBackend& b) {
                            auto u = b.Input(0, std::vector<double>{0.0}, 1);
                            return b.Open(fxg::TaylorLogistic(b, S(u), 4));
                          }),
               ConfigError);
}

TEST(SecureFixed, TruncationErrorIsAtMostOneUnit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  std::vector<double> xs(500), ys(500);
  for (auto& v : xs) v = dist(rng);
  for (auto& v : ys) v = dist(rng);
  auto out = RunSecure1(3, kF13, [&](SecureBackend& b) {
    auto x = b.Input(0, xs, xs.size());
    auto y = b.Input(1, ys, ys.size());
    return b.Open(fxg::Mul(b, S(x), S(y)));
  });
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Exact product of the encoded inputs, then floor or floor + 1.
    const double ex = std::round(xs[i] * 8192) * std::round(ys[i] * 8192);
    const double lo = std::floor(ex / 8192) / 8192;
    EXPECT_GE(out[i], lo - 1e-12);
    EXPECT_LE(out[i], lo + kF13.ulp() + 1e-12);
  }
}

TEST(SecureFixed, MatchesFixedPointSimulation) {
  // The simulated backend rounds where the protocol truncates
  // probabilistically: per value they differ by at most a few units.
  std::vector<double> xs = {0.3, 7.5, 0.002, 40.0};
  auto sec = RunSecure1(2, kF28, [&](SecureBackend& b) {
    auto x = b.Input(0, xs, xs.size());
    return b.Open(b.Reciprocal(x));
  });
  PlainFixedBackend pf(kF28);
  auto x = pf.Input(0, xs, xs.size());
  auto plain = pf.Open(pf.Reciprocal(x));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(sec[i], plain[i], std::abs(plain[i]) * std::ldexp(1.0, -20))
        << xs[i];
  }
  EXPECT_EQ(pf.overflow_events(), 0u);
}

TEST(SecureFixed, InputRangeIsEnforced) {
  EXPECT_THROW(RunSecure1(2, kF13,
                          [](SecureBackend& b) {
                            auto x = b.Input(0, std::vector<double>{1e9}, 1);
                            return b.Open(x);
                          }),
               RangeError);
}

}  // namespace
}  // namespace mpml
