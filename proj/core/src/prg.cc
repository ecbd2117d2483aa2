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

#include "mpml/prg.h"

#include <cstring>

#include "mpml/errors.h"

namespace mpml {
namespace {

void EnsureSodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw ConfigError("libsodium failed to initialize");
}

}  // namespace

Sha256::Sha256() {
  EnsureSodium();
  crypto_hash_sha256_init(&state_);
}

Sha256& Sha256::Update(std::span<const uint8_t> data) {
  crypto_hash_sha256_update(&state_, data.data(), data.size());
  return *this;
}

Sha256& Sha256::Update(std::string_view data) {
  crypto_hash_sha256_update(
      &state_, reinterpret_cast<const unsigned char*>(data.data()),
      data.size());
  return *this;
}

Sha256& Sha256::UpdateU64(uint64_t v) {
  uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
  return Update(std::span<const uint8_t>(b, 8));
}

Digest Sha256::Final() {
  Digest out;
  crypto_hash_sha256_final(&state_, out.data());
  return out;
}

Digest Sha256::Hash(std::span<const uint8_t> data) {
  return Sha256().Update(data).Final();
}

std::string ToHex(std::span<const uint8_t> bytes) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

Prg::Prg(const Digest& key, uint64_t nonce) : key_(key) {
  EnsureSodium();
  for (int i = 0; i < 8; ++i) nonce_[i] = static_cast<uint8_t>(nonce >> (8 * i));
}

Prg Prg::Derive(uint64_t seed, std::string_view domain,
                std::initializer_list<uint64_t> tags, uint64_t nonce) {
  Sha256 h;
  h.Update("mpml-prg/").Update(domain).UpdateU64(seed);
  for (uint64_t t : tags) h.UpdateU64(t);
  return Prg(h.Final(), nonce);
}

void Prg::Refill() {
  std::memset(buf_.data(), 0, buf_.size());
  crypto_stream_chacha20_xor_ic(buf_.data(), buf_.data(), buf_.size(),
                                nonce_.data(), block_, key_.data());
  block_ += buf_.size() / 64;
  pos_ = 0;
}

void Prg::Fill(std::span<uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) Refill();
    std::size_t take = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

uint64_t Prg::NextU64() {
  uint8_t b[8];
  Fill(b);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

bool Prg::NextBit() {
  if (bits_left_ == 0) {
    bit_cache_ = NextU64();
    bits_left_ = 64;
  }
  bool b = (bit_cache_ & 1U) != 0;
  bit_cache_ >>= 1;
  --bits_left_;
  return b;
}

double Prg::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

uint64_t Prg::NextBelow(uint64_t bound) {
  MPML_ENFORCE(bound > 0, DomainError, "NextBelow(0)");
  uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
  uint64_t v = 0;
  do {
    v = NextU64();
  } while (v >= limit);
  return v % bound;
}

Limbs Prg::NextBits(std::size_t bits) {
  MPML_ENFORCE(bits <= kMaxLimbs * 64, RangeError, "too many random bits");
  Limbs out{};
  for (std::size_t i = 0; i * 64 < bits; ++i) out[i] = NextU64();
  return limbs::LowBits(out, bits);
}

FieldElement Prg::NextField(const PrimeField& field) {
  for (;;) {
    Limbs v = NextBits(field.bit_length());
    if (field.LessThanModulus(v)) return field.FromRandomLimbs(v);
  }
}

}  // namespace mpml
