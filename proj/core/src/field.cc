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

#include "mpml/field.h"

#include <map>
#include <memory>
#include <mutex>

#include <boost/multiprecision/miller_rabin.hpp>

#include "mpml/errors.h"

namespace mpml {
namespace {

using u128 = unsigned __int128;

template <std::size_t N>
inline void MontMulN(const uint64_t* a, const uint64_t* b, const uint64_t* p,
                     uint64_t n0inv, uint64_t* out) {
  uint64_t t[N + 2] = {};
  for (std::size_t i = 0; i < N; ++i) {
    uint64_t carry = 0;
    for (std::size_t j = 0; j < N; ++j) {
      u128 s = static_cast<u128>(a[j]) * b[i] + t[j] + carry;
      t[j] = static_cast<uint64_t>(s);
      carry = static_cast<uint64_t>(s >> 64);
    }
    u128 s = static_cast<u128>(t[N]) + carry;
    t[N] = static_cast<uint64_t>(s);
    t[N + 1] = static_cast<uint64_t>(s >> 64);

    uint64_t m = t[0] * n0inv;
    s = static_cast<u128>(m) * p[0] + t[0];
    carry = static_cast<uint64_t>(s >> 64);
    for (std::size_t j = 1; j < N; ++j) {
      s = static_cast<u128>(m) * p[j] + t[j] + carry;
      t[j - 1] = static_cast<uint64_t>(s);
      carry = static_cast<uint64_t>(s >> 64);
    }
    s = static_cast<u128>(t[N]) + carry;
    t[N - 1] = static_cast<uint64_t>(s);
    t[N] = t[N + 1] + static_cast<uint64_t>(s >> 64);
  }
  // Result < 2p; subtract p once if needed.
  bool ge = t[N] != 0;
  if (!ge) {
    ge = true;
    for (std::size_t j = N; j-- > 0;) {
      if (t[j] != p[j]) {
        ge = t[j] > p[j];
        break;
      }
    }
  }
  if (ge) {
    uint64_t borrow = 0;
    for (std::size_t j = 0; j < N; ++j) {
      u128 d = static_cast<u128>(t[j]) - p[j] - borrow;
      out[j] = static_cast<uint64_t>(d);
      borrow = static_cast<uint64_t>(d >> 64) & 1U;
    }
  } else {
    for (std::size_t j = 0; j < N; ++j) out[j] = t[j];
  }
}

// msb of zero is undefined in boost.
std::size_t msb_or_zero(const BigInt& v) {
  return v == 0 ? 0 : boost::multiprecision::msb(v);
}

std::mutex& RegistryMutex() {
  static std::mutex m;
  return m;
}

std::map<BigInt, std::unique_ptr<PrimeField>>& Registry() {
  static std::map<BigInt, std::unique_ptr<PrimeField>> r;
  return r;
}

}  // namespace

namespace limbs {

Limbs ShiftRight(const Limbs& v, std::size_t shift) {
  Limbs out{};
  std::size_t words = shift / 64;
  std::size_t bits = shift % 64;
  for (std::size_t i = 0; i + words < kMaxLimbs; ++i) {
    uint64_t lo = v[i + words] >> bits;
    uint64_t hi = 0;
    if (bits != 0 && i + words + 1 < kMaxLimbs) {
      hi = v[i + words + 1] << (64 - bits);
    }
    out[i] = lo | hi;
  }
  return out;
}

Limbs LowBits(const Limbs& v, std::size_t bits) {
  Limbs out{};
  for (std::size_t i = 0; i < kMaxLimbs; ++i) {
    if (bits >= (i + 1) * 64) {
      out[i] = v[i];
    } else if (bits > i * 64) {
      out[i] = v[i] & ((uint64_t{1} << (bits - i * 64)) - 1);
    }
  }
  return out;
}

Limbs FromBigInt(const BigInt& v) {
  MPML_ENFORCE(v >= 0 && msb_or_zero(v) < kMaxLimbs * 64, RangeError,
               "integer does not fit in limb array");
  Limbs out{};
  BigInt x = v;
  for (std::size_t i = 0; i < kMaxLimbs && x != 0; ++i) {
    out[i] = static_cast<uint64_t>(x & BigInt(~uint64_t{0}));
    x >>= 64;
  }
  return out;
}

BigInt ToBigInt(const Limbs& v) {
  BigInt out = 0;
  for (std::size_t i = kMaxLimbs; i-- > 0;) {
    out <<= 64;
    out += v[i];
  }
  return out;
}

}  // namespace limbs

const PrimeField& PrimeField::Get(const BigInt& modulus) {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  auto& reg = Registry();
  auto it = reg.find(modulus);
  if (it != reg.end()) return *it->second;
  auto field = std::unique_ptr<PrimeField>(new PrimeField(modulus));
  const PrimeField& ref = *field;
  reg.emplace(modulus, std::move(field));
  return ref;
}

const PrimeField& PrimeField::Preset(int bits) {
  BigInt one = 1;
  switch (bits) {
    case 128:
      return Get((one << 128) - 159);
    case 192:
      return Get((one << 192) - 237);
    case 256:
      return Get((one << 256) - 189);
    case 320:
      return Get((one << 320) - 197);
    default:
      throw ConfigError("no preset prime with " + std::to_string(bits) +
                        " bits");
  }
}

PrimeField::PrimeField(const BigInt& modulus) : modulus_(modulus) {
  MPML_ENFORCE(modulus > 2, ConfigError, "modulus must be an odd prime > 2");
  MPML_ENFORCE(boost::multiprecision::msb(modulus) < kMaxLimbs * 64,
               ConfigError, "modulus exceeds 320 bits");
  MPML_ENFORCE(boost::multiprecision::miller_rabin_test(modulus, 32),
               ConfigError, "modulus is not prime");
  bits_ = boost::multiprecision::msb(modulus) + 1;
  n_ = (bits_ + 63) / 64;
  half_ = modulus / 2;
  p_ = limbs::FromBigInt(modulus);

  uint64_t inv = 1;
  for (int i = 0; i < 7; ++i) inv *= 2 - p_[0] * inv;
  n0inv_ = ~inv + 1;

  BigInt r = BigInt(1) << (64 * n_);
  r2_ = limbs::FromBigInt((r * r) % modulus);
  one_mont_ = limbs::FromBigInt(r % modulus);
}

void PrimeField::MontMul(const uint64_t* a, const uint64_t* b,
                         uint64_t* out) const {
  switch (n_) {
    case 1:
      return MontMulN<1>(a, b, p_.data(), n0inv_, out);
    case 2:
      return MontMulN<2>(a, b, p_.data(), n0inv_, out);
    case 3:
      return MontMulN<3>(a, b, p_.data(), n0inv_, out);
    case 4:
      return MontMulN<4>(a, b, p_.data(), n0inv_, out);
    default:
      return MontMulN<5>(a, b, p_.data(), n0inv_, out);
  }
}

void PrimeField::AddMod(const uint64_t* a, const uint64_t* b,
                        uint64_t* out) const {
  uint64_t carry = 0;
  uint64_t tmp[kMaxLimbs];
  for (std::size_t i = 0; i < n_; ++i) {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    tmp[i] = static_cast<uint64_t>(s);
    carry = static_cast<uint64_t>(s >> 64);
  }
  bool ge = carry != 0;
  if (!ge) {
    ge = true;
    for (std::size_t j = n_; j-- > 0;) {
      if (tmp[j] != p_[j]) {
        ge = tmp[j] > p_[j];
        break;
      }
    }
  }
  if (ge) {
    uint64_t borrow = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      u128 d = static_cast<u128>(tmp[i]) - p_[i] - borrow;
      out[i] = static_cast<uint64_t>(d);
      borrow = static_cast<uint64_t>(d >> 64) & 1U;
    }
  } else {
    for (std::size_t i = 0; i < n_; ++i) out[i] = tmp[i];
  }
}

void PrimeField::SubMod(const uint64_t* a, const uint64_t* b,
                        uint64_t* out) const {
  uint64_t borrow = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    out[i] = static_cast<uint64_t>(d);
    borrow = static_cast<uint64_t>(d >> 64) & 1U;
  }
  if (borrow != 0) {
    uint64_t carry = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      u128 s = static_cast<u128>(out[i]) + p_[i] + carry;
      out[i] = static_cast<uint64_t>(s);
      carry = static_cast<uint64_t>(s >> 64);
    }
  }
}

bool PrimeField::LessThanModulus(const Limbs& v) const {
  for (std::size_t j = kMaxLimbs; j-- > n_;) {
    if (v[j] != 0) return false;
  }
  for (std::size_t j = n_; j-- > 0;) {
    if (v[j] != p_[j]) return v[j] < p_[j];
  }
  return false;
}

FieldElement PrimeField::Zero() const { return FieldElement(this, Limbs{}); }

FieldElement PrimeField::One() const { return FieldElement(this, one_mont_); }

FieldElement PrimeField::FromCanonical(const Limbs& v) const {
  MPML_ENFORCE(LessThanModulus(v), RangeError, "value not reduced mod p");
  Limbs out{};
  MontMul(v.data(), r2_.data(), out.data());
  return FieldElement(this, out);
}

FieldElement PrimeField::FromRandomLimbs(const Limbs& v) const {
  MPML_ENFORCE(LessThanModulus(v), RangeError, "value not reduced mod p");
  return FieldElement(this, v);
}

FieldElement PrimeField::FromU64(uint64_t v) const {
  if (n_ == 1 && v >= p_[0]) v %= p_[0];
  Limbs l{};
  l[0] = v;
  return FromCanonical(l);
}

FieldElement PrimeField::FromBigInt(const BigInt& v) const {
  MPML_ENFORCE(v >= 0, RangeError, "FromBigInt expects a non-negative value");
  return FromCanonical(limbs::FromBigInt(v % modulus_));
}

FieldElement PrimeField::FromSigned(int64_t v) const {
  if (v >= 0) {
    BigInt b = v;
    MPML_ENFORCE(b <= half_, RangeError, "signed value outside (-p/2, p/2)");
    return FromCanonical(limbs::FromBigInt(b));
  }
  // -(v) without overflow for INT64_MIN.
  BigInt mag = -BigInt(v);
  MPML_ENFORCE(mag <= half_, RangeError, "signed value outside (-p/2, p/2)");
  return -FromCanonical(limbs::FromBigInt(mag));
}

FieldElement PrimeField::FromSigned(const BigInt& v) const {
  BigInt mag = v < 0 ? BigInt(-v) : v;
  MPML_ENFORCE(mag <= half_, RangeError, "signed value outside (-p/2, p/2)");
  FieldElement e = FromCanonical(limbs::FromBigInt(mag));
  return v < 0 ? -e : e;
}

FieldElement PrimeField::Pow2(std::size_t e) const {
  if (e < bits_ - 1) {
    Limbs l{};
    l[e / 64] = uint64_t{1} << (e % 64);
    return FromCanonical(l);
  }
  return FromBigInt(BigInt(1) << e);
}

FieldElement PrimeField::FromBytes(std::span<const uint8_t> bytes) const {
  MPML_ENFORCE(bytes.size() == byte_length(), ParseError,
               "field element encoding has wrong width");
  Limbs l{};
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    l[i / 8] |= static_cast<uint64_t>(bytes[i]) << (8 * (i % 8));
  }
  MPML_ENFORCE(LessThanModulus(l), ParseError,
               "field element encoding is not reduced");
  return FromCanonical(l);
}

const PrimeField& FieldElement::field() const {
  MPML_ENFORCE(field_ != nullptr, ConfigError, "unbound field element");
  return *field_;
}

void FieldElement::CheckCompatible(const FieldElement& o) const {
  if (field_ != o.field_ || field_ == nullptr) {
    throw ConfigError(field_ == nullptr || o.field_ == nullptr
                          ? "unbound field element"
                          : "field modulus mismatch");
  }
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  CheckCompatible(o);
  field_->AddMod(mont_.data(), o.mont_.data(), mont_.data());
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  CheckCompatible(o);
  field_->SubMod(mont_.data(), o.mont_.data(), mont_.data());
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  CheckCompatible(o);
  Limbs out{};
  field_->MontMul(mont_.data(), o.mont_.data(), out.data());
  mont_ = out;
  return *this;
}

FieldElement FieldElement::operator-() const {
  const PrimeField& f = field();
  FieldElement zero = f.Zero();
  f.SubMod(zero.mont_.data(), mont_.data(), zero.mont_.data());
  return zero;
}

bool FieldElement::IsZero() const {
  for (uint64_t w : mont_) {
    if (w != 0) return false;
  }
  return true;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field_ == b.field_ && a.mont_ == b.mont_;
}

FieldElement FieldElement::Pow(const BigInt& e) const {
  MPML_ENFORCE(e >= 0, DomainError, "negative exponent");
  FieldElement result = field().One();
  FieldElement base = *this;
  BigInt x = e;
  while (x != 0) {
    if ((x & 1) != 0) result *= base;
    base *= base;
    x >>= 1;
  }
  return result;
}

FieldElement FieldElement::Inverse() const {
  MPML_ENFORCE(!IsZero(), DomainError, "inverse of zero");
  return Pow(field_->modulus() - 2);
}

Limbs FieldElement::ToCanonical() const {
  const PrimeField& f = field();
  Limbs one{};
  one[0] = 1;
  Limbs out{};
  f.MontMul(mont_.data(), one.data(), out.data());
  return out;
}

BigInt FieldElement::ToBigInt() const { return limbs::ToBigInt(ToCanonical()); }

BigInt FieldElement::ToSigned() const {
  BigInt v = ToBigInt();
  if (v > field_->half_) v -= field_->modulus();
  return v;
}

bool FieldElement::ToSigned128(__int128& out) const {
  Limbs c = ToCanonical();
  const Limbs& p = field_->raw_modulus();
  auto fits = [](const Limbs& v) {
    for (std::size_t i = 2; i < kMaxLimbs; ++i) {
      if (v[i] != 0) return false;
    }
    return (v[1] >> 63) == 0;
  };
  if (fits(c)) {
    out = static_cast<__int128>((static_cast<u128>(c[1]) << 64) | c[0]);
    return true;
  }
  // Negative side: p - c.
  Limbs d{};
  uint64_t borrow = 0;
  for (std::size_t i = 0; i < kMaxLimbs; ++i) {
    u128 t = static_cast<u128>(p[i]) - c[i] - borrow;
    d[i] = static_cast<uint64_t>(t);
    borrow = static_cast<uint64_t>(t >> 64) & 1U;
  }
  if (borrow == 0 && fits(d)) {
    out = -static_cast<__int128>((static_cast<u128>(d[1]) << 64) | d[0]);
    return true;
  }
  return false;
}

void FieldElement::ToBytes(std::span<uint8_t> out) const {
  const PrimeField& f = field();
  MPML_ENFORCE(out.size() == f.byte_length(), ConfigError,
               "output buffer has wrong width");
  Limbs c = ToCanonical();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(c[i / 8] >> (8 * (i % 8)));
  }
}

std::string FieldElement::ToString() const {
  return bound() ? ToBigInt().str() : std::string("<unbound>");
}

}  // namespace mpml
