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
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mpml/field.h"
#include "mpml/fixed_point.h"
#include "mpml/share.h"

namespace mpml {

enum class MaterialKind { kTriple = 0, kTruncPair = 1, kBit = 2, kMask = 3 };

const char* MaterialKindName(MaterialKind kind);

// Counts of correlated randomness, either requested or consumed.
struct Budget {
  uint64_t triples = 0;
  uint64_t trunc_pairs = 0;
  uint64_t bits = 0;
  std::vector<uint64_t> masks;  // per owning party

  uint64_t masks_total() const;
  uint64_t mask_count(int owner) const;
  void AddMasks(int owner, uint64_t count);

  Budget& operator+=(const Budget& o);
  friend Budget operator+(Budget a, const Budget& b) { return a += b; }
  friend Budget operator*(Budget a, uint64_t times);
  // Componentwise <=.
  bool Covers(const Budget& used) const;
  std::string ToString() const;
  friend bool operator==(const Budget&, const Budget&);
};

struct DealerConfig {
  const PrimeField* field = nullptr;
  FixedPointParams params;
  int n_parties = 2;
  uint64_t seed = 1;
};

class MaterialLane;

// A single party's stream of preprocessed material. Items are handed out in
// index order and never twice.
class PartyMaterial {
 public:
  ~PartyMaterial();

  int party_id() const { return party_; }
  int n_parties() const { return n_; }
  const PrimeField& field() const { return *field_; }
  const FixedPointParams& params() const { return params_; }
  const FieldElement& mac_key_share() const { return alpha_share_; }

  Triple TakeTriple();
  TruncPair TakeTruncPair();
  AuthShare TakeBit();
  MaskShare TakeMask(int owner);

  Budget consumed() const;
  // Items available before PreprocessingExhausted; unlimited lanes report
  // the uint64 maximum.
  Budget limit() const;
  // Time spent producing or loading material.
  double material_seconds() const { return material_seconds_; }

  // Test hook: steps a lane's cursor back so the next Take re-requests an
  // already consumed index, which must be refused.
  void RewindForTest(MaterialKind kind, uint64_t count, int owner = 0);

 private:
  friend class Dealer;
  PartyMaterial(int party, int n, const PrimeField& field,
                const FixedPointParams& params);
  MaterialLane& Lane(MaterialKind kind, int owner);
  void Take(MaterialLane& lane, std::size_t elems, AuthShare* out,
            FieldElement* clear);

  int party_;
  int n_;
  const PrimeField* field_;
  FixedPointParams params_;
  FieldElement alpha_share_;
  std::vector<std::unique_ptr<MaterialLane>> lanes_;  // 3 + n lanes
  double material_seconds_ = 0.0;
};

// Trusted-dealer stand-in for the offline phase. Every item is a pure
// function of (seed, kind, owner, index): the secret values additionally do
// not depend on the number of parties, so protocol outputs are reproducible
// across party counts.
class Dealer {
 public:
  explicit Dealer(DealerConfig config);

  const DealerConfig& config() const { return config_; }
  // Global MAC key; exposed for test oracles only.
  FieldElement mac_key() const;
  FieldElement mac_key_share(int party) const;

  // Lazily generated stream. limit (optional) caps each lane.
  std::unique_ptr<PartyMaterial> Inline(int party,
                                        const Budget* limit = nullptr) const;

  // Writes one file per party, returns their paths ("<prefix>.p<i>.bin").
  // Returns generation wall time in seconds via out parameter.
  std::vector<std::string> WriteFiles(const Budget& budget,
                                      const std::string& prefix,
                                      double* seconds = nullptr) const;

  // Loads a party file. Fails with ParseError on malformed input and
  // ConfigError when the file does not match the expected session.
  static std::unique_ptr<PartyMaterial> OpenFile(
      const std::string& path, int expected_party, int expected_n,
      const PrimeField& expected_field, const FixedPointParams& expected);

 private:
  DealerConfig config_;
};

}  // namespace mpml
