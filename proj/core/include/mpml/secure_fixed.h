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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpml/engine.h"
#include "mpml/fixed_point.h"
#include "mpml/fx_generic.h"

namespace mpml {

namespace sfx {

// floor(a / 2^f) + {0,1} for |a| < 2^(k+f). One round, one pair each.
std::vector<AuthShare> Truncate(Engine& e, std::span<const AuthShare> a);

// Secret bit [a < 0] for |a| < 2^k. k+s random bits and k-1 triples each;
// k rounds for the whole batch.
std::vector<AuthShare> LtzBits(Engine& e, std::span<const AuthShare> a);

// One-hot most significant bit of 0 < a < 2^k: result[j][i] = [msb(a_j) == i].
// k+s random bits and 2k-2 triples each; 2k-1 rounds for the batch.
std::vector<std::vector<AuthShare>> MsbOneHot(Engine& e,
                                              std::span<const AuthShare> a);

}  // namespace sfx

struct NonlinearOptions {
  int reciprocal_iterations = 0;  // 0: DefaultNewtonIterations(f)
  int sqrt_iterations = 0;

  int Reciprocal(int f) const {
    return reciprocal_iterations > 0 ? reciprocal_iterations
                                     : fxg::DefaultNewtonIterations(f);
  }
  int Sqrt(int f) const {
    return sqrt_iterations > 0 ? sqrt_iterations
                               : fxg::DefaultNewtonIterations(f);
  }
};

// Backend over authenticated shares. See fx_generic.h for the contract.
class SecureBackend {
 public:
  using Value = AuthShare;

  explicit SecureBackend(Engine& engine, NonlinearOptions nl = {});

  const FixedPointParams& params() const { return engine_.params(); }
  int n_parties() const { return engine_.n_parties(); }
  int party_id() const { return engine_.party_id(); }
  Engine& engine() { return engine_; }
  const NonlinearOptions& nonlinear() const { return nl_; }

  Value Zero() const;
  Value Const(double c) const;
  Value ConstInt(int64_t c) const;
  Value Add(const Value& a, const Value& b) const { return a + b; }
  Value Sub(const Value& a, const Value& b) const { return a - b; }
  Value Neg(const Value& a) const { return -a; }
  Value AddConst(const Value& a, double c) const;
  Value AddConstInt(const Value& a, int64_t c) const;
  Value ScaleInt(const Value& a, int64_t c) const;
  Value MulConstRaw(const Value& a, double c) const;
  Value BitTimesConst(const Value& bit, double c) const;
  Value LinComb(std::span<const Value> bits,
                std::span<const BigInt> coeffs) const;

  std::vector<Value> MulRaw(std::span<const Value> x,
                            std::span<const Value> y);
  std::vector<Value> Truncate(std::span<const Value> v);
  std::vector<Value> Ltz(std::span<const Value> v);
  std::vector<std::vector<Value>> MsbOneHot(std::span<const Value> v);
  std::vector<Value> Reciprocal(std::span<const Value> v);
  std::vector<Value> InvSqrt(std::span<const Value> v);
  fxg::SqrtResult<SecureBackend> SqrtInvSqrt(std::span<const Value> v);

  // Fixed-point encodes the owner's values and shares them (one round).
  std::vector<Value> Input(int owner, std::span<const double> values,
                           std::size_t count);
  struct OwnedInput {
    int owner = 0;
    std::size_t count = 0;
    std::vector<double> values;  // read at the owner only
  };
  std::vector<std::vector<Value>> InputMany(
      const std::vector<OwnedInput>& inputs);
  std::vector<double> Open(std::span<const Value> v);

 private:
  FieldElement Raw(double c) const;

  Engine& engine_;
  NonlinearOptions nl_;
};

}  // namespace mpml
