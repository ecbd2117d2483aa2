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

// Plaintext backends: ideal double-precision arithmetic, and a simulated
// fixed-point machine that mirrors the secure backend step for step with
// deterministic round-to-nearest truncation.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mpml/fixed_point.h"
#include "mpml/fx_generic.h"
#include "mpml/secure_fixed.h"

namespace mpml {

class PlainDoubleBackend {
 public:
  using Value = double;

  explicit PlainDoubleBackend(FixedPointParams params = {}, int n_parties = 1)
      : params_(params), n_(n_parties) {}

  const FixedPointParams& params() const { return params_; }
  int n_parties() const { return n_; }

  Value Zero() const { return 0.0; }
  Value Const(double c) const { return c; }
  Value ConstInt(int64_t c) const { return static_cast<double>(c); }
  Value Add(Value a, Value b) const { return a + b; }
  Value Sub(Value a, Value b) const { return a - b; }
  Value Neg(Value a) const { return -a; }
  Value AddConst(Value a, double c) const { return a + c; }
  Value AddConstInt(Value a, int64_t c) const { return a + c; }
  Value ScaleInt(Value a, int64_t c) const { return a * c; }
  Value MulConstRaw(Value a, double c) const { return a * c; }
  Value BitTimesConst(Value bit, double c) const { return bit * c; }

  std::vector<Value> MulRaw(std::span<const Value> x, std::span<const Value> y);
  std::vector<Value> Truncate(std::span<const Value> v) {
    return {v.begin(), v.end()};
  }
  std::vector<Value> Ltz(std::span<const Value> v);
  std::vector<Value> Reciprocal(std::span<const Value> v);
  std::vector<Value> InvSqrt(std::span<const Value> v);
  fxg::SqrtResult<PlainDoubleBackend> SqrtInvSqrt(std::span<const Value> v);
  std::vector<Value> ExactLogistic(std::span<const Value> v) const {
    std::vector<Value> out;
    out.reserve(v.size());
    for (double u : v) out.push_back(1.0 / (1.0 + std::exp(-u)));
    return out;
  }

  std::vector<Value> Input(int, std::span<const double> values, std::size_t) {
    return {values.begin(), values.end()};
  }
  struct OwnedInput {
    int owner = 0;
    std::size_t count = 0;
    std::vector<double> values;
  };
  std::vector<std::vector<Value>> InputMany(
      const std::vector<OwnedInput>& inputs);
  std::vector<double> Open(std::span<const Value> v) {
    return {v.begin(), v.end()};
  }

 private:
  FixedPointParams params_;
  int n_;
};

// Simulated fixed point. Values are raw integers at the scale the algorithm
// implies; truncation rounds to nearest.
class PlainFixedBackend {
 public:
  using Value = boost::multiprecision::int512_t;

  explicit PlainFixedBackend(FixedPointParams params, int n_parties = 1,
                             NonlinearOptions nl = {});

  const FixedPointParams& params() const { return params_; }
  int n_parties() const { return n_; }
  // Truncation inputs that exceeded the 2^(k+f) contract.
  uint64_t overflow_events() const { return overflows_; }

  Value Zero() const { return 0; }
  Value Const(double c) const;
  Value ConstInt(int64_t c) const { return c; }
  Value Add(const Value& a, const Value& b) const { return a + b; }
  Value Sub(const Value& a, const Value& b) const { return a - b; }
  Value Neg(const Value& a) const { return -a; }
  Value AddConst(const Value& a, double c) const { return a + Const(c); }
  Value AddConstInt(const Value& a, int64_t c) const { return a + c; }
  Value ScaleInt(const Value& a, int64_t c) const { return a * c; }
  Value MulConstRaw(const Value& a, double c) const { return a * Const(c); }
  Value BitTimesConst(const Value& bit, double c) const {
    return bit * Const(c);
  }
  Value LinComb(std::span<const Value> bits,
                std::span<const BigInt> coeffs) const;

  std::vector<Value> MulRaw(std::span<const Value> x, std::span<const Value> y);
  std::vector<Value> Truncate(std::span<const Value> v);
  std::vector<Value> Ltz(std::span<const Value> v);
  std::vector<std::vector<Value>> MsbOneHot(std::span<const Value> v);
  std::vector<Value> Reciprocal(std::span<const Value> v);
  std::vector<Value> InvSqrt(std::span<const Value> v);
  fxg::SqrtResult<PlainFixedBackend> SqrtInvSqrt(std::span<const Value> v);

  std::vector<Value> Input(int owner, std::span<const double> values,
                           std::size_t count);
  struct OwnedInput {
    int owner = 0;
    std::size_t count = 0;
    std::vector<double> values;
  };
  std::vector<std::vector<Value>> InputMany(
      const std::vector<OwnedInput>& inputs);
  std::vector<double> Open(std::span<const Value> v) const;

  double Decode(const Value& v) const;

 private:
  FixedPointParams params_;
  int n_;
  NonlinearOptions nl_;
  Value trunc_limit_;
  uint64_t overflows_ = 0;
};

}  // namespace mpml
