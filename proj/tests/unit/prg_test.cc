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

#include <set>

#include <gtest/gtest.h>

#include "mpml/prg.h"

namespace mpml {
namespace {

TEST(Sha256, KnownVector) {
  Sha256 h;
  h.Update("abc");
  EXPECT_EQ(ToHex(h.Final()),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Prg, DeterministicPerSeedAndDomain) {
  auto a = Prg::Derive(5, "x", {1, 2});
  auto b = Prg::Derive(5, "x", {1, 2});
  auto c = Prg::Derive(5, "x", {1, 3});
  auto d = Prg::Derive(5, "y", {1, 2});
  uint64_t va = a.NextU64();
  EXPECT_EQ(va, b.NextU64());
  EXPECT_NE(va, c.NextU64());
  EXPECT_NE(va, d.NextU64());
}

TEST(Prg, NextBelowIsInRangeAndCoversIt) {
  auto p = Prg::Derive(1, "test/below");
  std::set<uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    uint64_t v = p.NextBelow(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Prg, NextDoubleMeanIsAboutHalf) {
  auto p = Prg::Derive(2, "test/double");
  double s = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = p.NextDouble();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    s += v;
  }
  EXPECT_NEAR(s / n, 0.5, 0.01);
}

TEST(Prg, NextFieldBelowModulus) {
  const auto& F = PrimeField::Preset(128);
  auto p = Prg::Derive(3, "test/field");
  for (int i = 0; i < 200; ++i) {
    EXPECT_LT(p.NextField(F).ToBigInt(), F.modulus());
  }
}

TEST(Prg, NextBitsRespectsWidth) {
  auto p = Prg::Derive(4, "test/bits");
  for (int i = 0; i < 100; ++i) {
    Limbs v = p.NextBits(70);
    EXPECT_EQ(v[1] >> 6, 0u);
    EXPECT_EQ(v[2], 0u);
  }
}

}  // namespace
}  // namespace mpml
