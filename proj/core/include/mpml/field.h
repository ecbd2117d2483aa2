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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mpml {

using BigInt = boost::multiprecision::cpp_int;

// Elements are stored in fixed-size limb arrays; moduli up to 320 bits.
inline constexpr std::size_t kMaxLimbs = 5;
using Limbs = std::array<uint64_t, kMaxLimbs>;

class FieldElement;

// A prime modulus with precomputed Montgomery constants.
//
// Instances are interned: Get() returns the same object for equal moduli, so
// element compatibility reduces to pointer equality and a PrimeField outlives
// every element that refers to it.
class PrimeField {
 public:
  static const PrimeField& Get(const BigInt& modulus);

  // Largest prime below 2^bits for bits in {128, 192, 256, 320}.
  static const PrimeField& Preset(int bits);

  PrimeField(const PrimeField&) = delete;
  PrimeField& operator=(const PrimeField&) = delete;

  const BigInt& modulus() const { return modulus_; }
  std::size_t limbs() const { return n_; }
  std::size_t bit_length() const { return bits_; }
  std::size_t byte_length() const { return (bits_ + 7) / 8; }

  FieldElement Zero() const;
  FieldElement One() const;
  FieldElement FromU64(uint64_t v) const;
  // Reduces any non-negative integer modulo p.
  FieldElement FromBigInt(const BigInt& v) const;
  // Centered-lift embedding; |v| must be < p/2.
  FieldElement FromSigned(int64_t v) const;
  FieldElement FromSigned(const BigInt& v) const;
  // v must already be < p.
  FieldElement FromCanonical(const Limbs& v) const;
  FieldElement Pow2(std::size_t e) const;
  // Fixed-width little-endian; rejects values >= p.
  FieldElement FromBytes(std::span<const uint8_t> bytes) const;
  // Interprets uniformly random limbs (already < p) as an element.
  FieldElement FromRandomLimbs(const Limbs& v) const;

  bool operator==(const PrimeField& o) const { return this == &o; }

  // Montgomery kernels over the low limbs() words.
  void MontMul(const uint64_t* a, const uint64_t* b, uint64_t* out) const;
  void AddMod(const uint64_t* a, const uint64_t* b, uint64_t* out) const;
  void SubMod(const uint64_t* a, const uint64_t* b, uint64_t* out) const;
  bool LessThanModulus(const Limbs& v) const;

  const Limbs& raw_modulus() const { return p_; }

 private:
  friend class FieldElement;
  explicit PrimeField(const BigInt& modulus);

  BigInt modulus_;
  BigInt half_;  // floor(p / 2)
  std::size_t n_ = 0;
  std::size_t bits_ = 0;
  Limbs p_{};
  Limbs r2_{};
  Limbs one_mont_{};
  uint64_t n0inv_ = 0;
};

// An element of a PrimeField, held in Montgomery form.
//
// Default-constructed elements are unbound; arithmetic on them throws
// ConfigError. Mixing elements of different fields throws ConfigError.
class FieldElement {
 public:
  FieldElement() = default;

  bool bound() const { return field_ != nullptr; }
  const PrimeField& field() const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) {
    return a += b;
  }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) {
    return a -= b;
  }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) {
    return a *= b;
  }
  FieldElement operator-() const;

  // Throws DomainError for zero.
  FieldElement Inverse() const;
  FieldElement Pow(const BigInt& e) const;

  bool IsZero() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  Limbs ToCanonical() const;
  BigInt ToBigInt() const;
  // Centered lift: values >= p/2 map to value - p.
  BigInt ToSigned() const;
  // Centered lift when it fits in 127 bits plus sign.
  bool ToSigned128(__int128& out) const;

  void ToBytes(std::span<uint8_t> out) const;
  std::string ToString() const;

 private:
  friend class PrimeField;
  FieldElement(const PrimeField* f, const Limbs& mont) : field_(f), mont_(mont) {}
  void CheckCompatible(const FieldElement& o) const;

  const PrimeField* field_ = nullptr;
  Limbs mont_{};
};

// Free-function spellings of the basic operations.
inline FieldElement FeAdd(const FieldElement& a, const FieldElement& b) {
  return a + b;
}
inline FieldElement FeMul(const FieldElement& a, const FieldElement& b) {
  return a * b;
}
inline FieldElement FeNeg(const FieldElement& a) { return -a; }
inline FieldElement FeInv(const FieldElement& a) { return a.Inverse(); }

namespace limbs {

inline bool Bit(const Limbs& v, std::size_t i) {
  return i < kMaxLimbs * 64 && ((v[i / 64] >> (i % 64)) & 1U) != 0;
}

Limbs ShiftRight(const Limbs& v, std::size_t shift);
// v mod 2^bits.
Limbs LowBits(const Limbs& v, std::size_t bits);
Limbs FromBigInt(const BigInt& v);
BigInt ToBigInt(const Limbs& v);

}  // namespace limbs

}  // namespace mpml
