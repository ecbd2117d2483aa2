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
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include <sodium.h>

#include "mpml/field.h"

namespace mpml {

using Digest = std::array<uint8_t, 32>;

class Sha256 {
 public:
  Sha256();
  Sha256& Update(std::span<const uint8_t> data);
  Sha256& Update(std::string_view data);
  Sha256& UpdateU64(uint64_t v);
  Digest Final();

  static Digest Hash(std::span<const uint8_t> data);

 private:
  crypto_hash_sha256_state state_;
};

std::string ToHex(std::span<const uint8_t> bytes);

// ChaCha20 keystream generator. Deterministic for a given (key, nonce), which
// is what lets every party and the file writer regenerate identical material.
class Prg {
 public:
  explicit Prg(const Digest& key, uint64_t nonce = 0);

  // Key = SHA-256(domain || seed || tags...).
  static Prg Derive(uint64_t seed, std::string_view domain,
                    std::initializer_list<uint64_t> tags = {},
                    uint64_t nonce = 0);

  void Fill(std::span<uint8_t> out);
  uint64_t NextU64();
  bool NextBit();
  // Uniform in [0, 1) with 53 random bits.
  double NextDouble();
  // Uniform integer in [0, bound).
  uint64_t NextBelow(uint64_t bound);
  // Uniform integer in [0, 2^bits).
  Limbs NextBits(std::size_t bits);
  // Uniform field element by rejection sampling.
  FieldElement NextField(const PrimeField& field);

 private:
  void Refill();

  Digest key_;
  std::array<uint8_t, 8> nonce_{};
  uint64_t block_ = 0;
  std::array<uint8_t, 256> buf_{};
  std::size_t pos_ = 256;
  uint64_t bit_cache_ = 0;
  int bits_left_ = 0;
};

}  // namespace mpml
