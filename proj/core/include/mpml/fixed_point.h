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

#include <string>
#include <vector>

#include "mpml/field.h"

namespace mpml {

// Fixed-point regime: a real x is carried as the integer round(x * 2^f).
//   f: fractional bits ("precision after the decimal point")
//   k: significand bits, integer + fraction, sign excluded; |raw| < 2^k
//   s: statistical security bits used by masked openings
struct FixedPointParams {
  int f = 28;
  int k = 56;
  int s = 40;

  // k defaults to 2f.
  static FixedPointParams WithPrecision(int f, int k = 0, int s = 40);

  void Validate() const;
  // Requires bitlen(p) >= 2k + s + 2.
  void ValidateFor(const PrimeField& field) const;
  std::size_t RequiredFieldBits() const;

  double ulp() const;
  // Largest decodable magnitude, 2^(k-f).
  double max_abs() const;

  std::string ToString() const;
  friend bool operator==(const FixedPointParams&,
                         const FixedPointParams&) = default;
};

// The precisions used by the experiments: f = 13, 28, 60 with k = 2f.
std::vector<FixedPointParams> PrecisionPresets();

// Smallest preset prime (>= 128 bits) that satisfies params.
const PrimeField& DefaultFieldFor(const FixedPointParams& params);

// round(x * 2^f), ties away from zero. Throws RangeError when |x| >= 2^(k-f).
BigInt FxRaw(long double x, const FixedPointParams& params);
FieldElement FxEncode(long double x, const FixedPointParams& params,
                      const PrimeField& field);
// centered-lift(raw) / 2^f.
double FxDecode(const FieldElement& raw, const FixedPointParams& params);
long double FxDecodeLong(const FieldElement& raw,
                         const FixedPointParams& params);

// Exact conversion of an integral long double to BigInt.
BigInt IntegralToBigInt(long double v);
long double BigIntToLongDouble(const BigInt& v);

}  // namespace mpml
