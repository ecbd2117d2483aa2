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

// Preprocessing and communication cost of the secure operations.
//
// Two views that must agree: closed-form per-primitive formulas, and a
// counting backend that runs any generic algorithm symbolically and tallies
// what the secure backend would consume.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpml/dealer.h"
#include "mpml/fixed_point.h"
#include "mpml/fx_generic.h"
#include "mpml/secure_fixed.h"

namespace mpml {

struct Cost {
  uint64_t triples = 0;
  uint64_t trunc_pairs = 0;
  uint64_t bits = 0;
  uint64_t rounds = 0;           // online rounds, MAC checks excluded
  uint64_t opened_elements = 0;  // per party, summed over rounds
  std::vector<uint64_t> input_elements;  // per owner

  Cost& operator+=(const Cost& o);
  friend Cost operator+(Cost a, const Cost& b) { return a += b; }
  friend bool operator==(const Cost& a, const Cost& b) {
    return a.triples == b.triples && a.trunc_pairs == b.trunc_pairs &&
           a.bits == b.bits && a.rounds == b.rounds &&
           a.opened_elements == b.opened_elements &&
           a.input_elements == b.input_elements;
  }

  Budget ToBudget(int n_parties) const;
  std::string ToString() const;
};

// ------------------------------------------------------ closed-form formulas
namespace cost {

// m truncated products, one round of openings plus one of truncation.
Cost Mul(uint64_t m);
// `count` dot products of length `len`.
Cost Inner(uint64_t count, uint64_t len);
Cost Truncate(uint64_t m);
Cost Ltz(uint64_t m, const FixedPointParams& p);
Cost MsbOneHot(uint64_t m, const FixedPointParams& p);
Cost Reciprocal(uint64_t m, const FixedPointParams& p, int iterations);
Cost SqrtInvSqrt(uint64_t m, const FixedPointParams& p, int iterations,
                 bool want_sqrt, bool want_inv);
Cost Piecewise(uint64_t m, const FixedPointParams& p);
Cost Taylor(uint64_t m, int degree);

// Bytes one party sends to each peer: every round carries a frame header,
// open rounds carry opened_elements elements, input rounds carry the owner's
// values only.
uint64_t BytesPerPeer(const Cost& c, int party, std::size_t session_id_len,
                      std::size_t element_bytes);
// Per-peer bytes for a given number of MAC checks.
uint64_t MacCheckBytesPerPeer(uint64_t checks, std::size_t session_id_len,
                              std::size_t element_bytes);
inline constexpr uint64_t kMacCheckRounds = 4;

}  // namespace cost

// Symbolic backend: values carry no data; every interactive call is tallied.
class CountingBackend {
 public:
  struct Value {};

  CountingBackend(FixedPointParams params, int n_parties,
                  NonlinearOptions nl = {});

  const FixedPointParams& params() const { return params_; }
  int n_parties() const { return n_; }
  const Cost& cost() const { return cost_; }

  Value Zero() const { return {}; }
  Value Const(double) const { return {}; }
  Value ConstInt(int64_t) const { return {}; }
  Value Add(Value, Value) const { return {}; }
  Value Sub(Value, Value) const { return {}; }
  Value Neg(Value) const { return {}; }
  Value AddConst(Value, double) const { return {}; }
  Value AddConstInt(Value, int64_t) const { return {}; }
  Value ScaleInt(Value, int64_t) const { return {}; }
  Value MulConstRaw(Value, double) const { return {}; }
  Value BitTimesConst(Value, double) const { return {}; }
  Value LinComb(std::span<const Value>, std::span<const BigInt>) const {
    return {};
  }

  std::vector<Value> MulRaw(std::span<const Value> x, std::span<const Value> y);
  std::vector<Value> Truncate(std::span<const Value> v);
  std::vector<Value> Ltz(std::span<const Value> v);
  std::vector<std::vector<Value>> MsbOneHot(std::span<const Value> v);
  std::vector<Value> Reciprocal(std::span<const Value> v);
  std::vector<Value> InvSqrt(std::span<const Value> v);
  fxg::SqrtResult<CountingBackend> SqrtInvSqrt(std::span<const Value> v);

  std::vector<Value> Input(int owner, std::span<const double> values,
                           std::size_t count);
  struct OwnedInput {
    int owner = 0;
    std::size_t count = 0;
    std::vector<double> values;
  };
  std::vector<std::vector<Value>> InputMany(
      const std::vector<OwnedInput>& inputs);
  std::vector<double> Open(std::span<const Value> v);

 private:
  FixedPointParams params_;
  int n_;
  NonlinearOptions nl_;
  Cost cost_;
};

}  // namespace mpml
