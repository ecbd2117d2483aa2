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

#include "mpml/fixed_point.h"

#include <cmath>
#include <sstream>

#include "mpml/errors.h"

namespace mpml {

FixedPointParams FixedPointParams::WithPrecision(int f, int k, int s) {
  FixedPointParams p;
  p.f = f;
  p.k = k == 0 ? 2 * f : k;
  p.s = s;
  p.Validate();
  return p;
}

void FixedPointParams::Validate() const {
  MPML_ENFORCE(f > 0 && f <= k, ConfigError,
               "fixed-point params need 0 < f <= k, got " + ToString());
  MPML_ENFORCE(s > 0, ConfigError, "statistical parameter s must be > 0");
  MPML_ENFORCE(k <= 160, ConfigError, "k above 160 bits is not supported");
}

std::size_t FixedPointParams::RequiredFieldBits() const {
  return static_cast<std::size_t>(2 * k + s + 2);
}

void FixedPointParams::ValidateFor(const PrimeField& field) const {
  Validate();
  MPML_ENFORCE(field.bit_length() >= RequiredFieldBits(), ConfigError,
               "modulus of " + std::to_string(field.bit_length()) +
                   " bits is too small for " + ToString() + " (need " +
                   std::to_string(RequiredFieldBits()) + ")");
}

double FixedPointParams::ulp() const { return std::ldexp(1.0, -f); }

double FixedPointParams::max_abs() const { return std::ldexp(1.0, k - f); }

std::string FixedPointParams::ToString() const {
  std::ostringstream os;
  os << "f=" << f << ",k=" << k << ",s=" << s;
  return os.str();
}

std::vector<FixedPointParams> PrecisionPresets() {
  return {FixedPointParams::WithPrecision(13),
          FixedPointParams::WithPrecision(28),
          FixedPointParams::WithPrecision(60)};
}

const PrimeField& DefaultFieldFor(const FixedPointParams& params) {
  params.Validate();
  for (int bits : {128, 192, 256, 320}) {
    if (static_cast<std::size_t>(bits) >= params.RequiredFieldBits()) {
      return PrimeField::Preset(bits);
    }
  }
  throw ConfigError("no preset prime is large enough for " +
                    params.ToString());
}

BigInt IntegralToBigInt(long double v) {
  if (std::fabs(v) < 9.0e18L) return BigInt(static_cast<int64_t>(v));
  int exp = 0;
  long double mant = std::frexp(std::fabs(v), &exp);
  // 64-bit mantissa of x87 long double.
  auto m = static_cast<uint64_t>(std::ldexp(mant, 64));
  BigInt out = m;
  if (exp >= 64) {
    out <<= (exp - 64);
  } else {
    out >>= (64 - exp);
  }
  return v < 0 ? BigInt(-out) : out;
}

long double BigIntToLongDouble(const BigInt& v) {
  return v.convert_to<long double>();
}

BigInt FxRaw(long double x, const FixedPointParams& params) {
  MPML_ENFORCE(std::isfinite(x), RangeError, "cannot encode non-finite value");
  long double scaled = std::ldexp(x, params.f);
  long double rounded = std::round(scaled);
  MPML_ENFORCE(std::fabs(rounded) < std::ldexp(1.0L, params.k), RangeError,
               "value out of fixed-point range for " + params.ToString());
  return IntegralToBigInt(rounded);
}

FieldElement FxEncode(long double x, const FixedPointParams& params,
                      const PrimeField& field) {
  return field.FromSigned(FxRaw(x, params));
}

long double FxDecodeLong(const FieldElement& raw,
                         const FixedPointParams& params) {
  __int128 small = 0;
  if (raw.ToSigned128(small)) {
    return std::ldexp(static_cast<long double>(small), -params.f);
  }
  return std::ldexp(BigIntToLongDouble(raw.ToSigned()), -params.f);
}

double FxDecode(const FieldElement& raw, const FixedPointParams& params) {
  return static_cast<double>(FxDecodeLong(raw, params));
}

}  // namespace mpml
