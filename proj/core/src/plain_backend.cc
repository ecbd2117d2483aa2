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

#include "mpml/plain_backend.h"

#include "mpml/errors.h"

namespace mpml {

// ------------------------------------------------------------------ double

std::vector<double> PlainDoubleBackend::MulRaw(std::span<const double> x,
                                               std::span<const double> y) {
  MPML_ENFORCE(x.size() == y.size(), ConfigError, "Mul size mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

std::vector<double> PlainDoubleBackend::Ltz(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] < 0 ? 1.0 : 0.0;
  return out;
}

std::vector<double> PlainDoubleBackend::Reciprocal(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    MPML_ENFORCE(v[i] != 0.0, NumericalError, "reciprocal of zero");
    out[i] = 1.0 / v[i];
  }
  return out;
}

std::vector<double> PlainDoubleBackend::InvSqrt(std::span<const double> v) {
  return SqrtInvSqrt(v).inv_sqrt;
}

fxg::SqrtResult<PlainDoubleBackend> PlainDoubleBackend::SqrtInvSqrt(
    std::span<const double> v) {
  fxg::SqrtResult<PlainDoubleBackend> r;
  for (double x : v) {
    MPML_ENFORCE(x > 0.0, NumericalError,
                 "square root of a non-positive value (matrix not SPD?)");
    double s = std::sqrt(x);
    r.sqrt.push_back(s);
    r.inv_sqrt.push_back(1.0 / s);
  }
  return r;
}

std::vector<std::vector<double>> PlainDoubleBackend::InputMany(
    const std::vector<OwnedInput>& inputs) {
  std::vector<std::vector<double>> out;
  for (const auto& in : inputs) out.push_back(in.values);
  return out;
}

// ------------------------------------------------------------------- fixed

using Int = PlainFixedBackend::Value;

namespace {

Int ToInt(const BigInt& v) { return Int(v); }

// floor(n / 2^f) for signed n.
Int FloorShift(const Int& n, int f) {
  if (n >= 0) return n >> f;
  Int m = -n;
  Int q = m >> f;
  if ((q << f) != m) q += 1;
  return -q;
}

}  // namespace

PlainFixedBackend::PlainFixedBackend(FixedPointParams params, int n_parties,
                                     NonlinearOptions nl)
    : params_(params), n_(n_parties), nl_(nl) {
  params_.Validate();
  trunc_limit_ = Int(1) << (params_.k + params_.f);
}

Int PlainFixedBackend::Const(double c) const {
  return ToInt(FxRaw(c, params_));
}

Int PlainFixedBackend::LinComb(std::span<const Int> bits,
                               std::span<const BigInt> coeffs) const {
  MPML_ENFORCE(bits.size() == coeffs.size(), ConfigError,
               "LinComb size mismatch");
  Int acc = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && coeffs[i] != 0) acc += bits[i] * ToInt(coeffs[i]);
  }
  return acc;
}

std::vector<Int> PlainFixedBackend::MulRaw(std::span<const Int> x,
                                           std::span<const Int> y) {
  MPML_ENFORCE(x.size() == y.size(), ConfigError, "Mul size mismatch");
  std::vector<Int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

std::vector<Int> PlainFixedBackend::Truncate(std::span<const Int> v) {
  std::vector<Int> out(v.size());
  const Int half = Int(1) << (params_.f - 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (abs(v[i]) >= trunc_limit_) ++overflows_;
    out[i] = FloorShift(v[i] + half, params_.f);
  }
  return out;
}

std::vector<Int> PlainFixedBackend::Ltz(std::span<const Int> v) {
  std::vector<Int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] < 0 ? 1 : 0;
  return out;
}

std::vector<std::vector<Int>> PlainFixedBackend::MsbOneHot(
    std::span<const Int> v) {
  const int k = params_.k;
  const Int mask = (Int(1) << k) - 1;
  std::vector<std::vector<Int>> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    std::vector<Int> h(k, 0);
    Int low = x & mask;  // the secure protocol only sees x mod 2^k
    if (x < 0) low = (mask + 1 + x) & mask;
    if (low != 0) h[msb(low)] = 1;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<Int> PlainFixedBackend::Reciprocal(std::span<const Int> v) {
  return fxg::NewtonReciprocal(*this, v, nl_.Reciprocal(params_.f));
}

std::vector<Int> PlainFixedBackend::InvSqrt(std::span<const Int> v) {
  return fxg::NewtonSqrtInvSqrt(*this, v, nl_.Sqrt(params_.f), false, true)
      .inv_sqrt;
}

fxg::SqrtResult<PlainFixedBackend> PlainFixedBackend::SqrtInvSqrt(
    std::span<const Int> v) {
  return fxg::NewtonSqrtInvSqrt(*this, v, nl_.Sqrt(params_.f), true, true);
}

std::vector<Int> PlainFixedBackend::Input(int, std::span<const double> values,
                                          std::size_t count) {
  MPML_ENFORCE(values.size() == count, ConfigError, "input size mismatch");
  std::vector<Int> out;
  out.reserve(count);
  for (double v : values) out.push_back(Const(v));
  return out;
}

std::vector<std::vector<Int>> PlainFixedBackend::InputMany(
    const std::vector<OwnedInput>& inputs) {
  std::vector<std::vector<Int>> out;
  for (const auto& in : inputs) out.push_back(Input(in.owner, in.values, in.count));
  return out;
}

double PlainFixedBackend::Decode(const Int& v) const {
  return std::ldexp(v.convert_to<long double>(), -params_.f);
}

std::vector<double> PlainFixedBackend::Open(std::span<const Int> v) const {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(Decode(x));
  return out;
}

}  // namespace mpml
