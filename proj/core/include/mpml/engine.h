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
#include <optional>
#include <span>
#include <vector>

#include "mpml/dealer.h"
#include "mpml/net.h"
#include "mpml/prg.h"
#include "mpml/share.h"

namespace mpml {

// Deliberate corruption for detection tests: the given party adds delta to
// the share it contributes for the opening_index-th opened element (0-based,
// counted over the session), either to the broadcast value share or to the
// MAC share it retains for checking.
struct TamperSpec {
  int party = 0;
  uint64_t opening_index = 0;
  bool mac = false;
  BigInt delta = 1;
};

struct EngineOptions {
  // Run a MAC check whenever this many openings are pending; 0 disables
  // periodic checks (a final check always runs in Finish()).
  uint64_t mac_check_interval = 10000;
  uint64_t coin_seed = 0;
  std::optional<TamperSpec> tamper;
};

struct EngineCounters {
  uint64_t opened_elements = 0;
  uint64_t open_rounds = 0;
  uint64_t input_rounds = 0;
  uint64_t input_elements = 0;
  uint64_t multiplications = 0;
  uint64_t mac_checks = 0;
  uint64_t mac_check_rounds = 0;
};

struct InputRequest {
  int owner = 0;
  std::size_t count = 0;
  // Only read at the owner.
  std::vector<FieldElement> values;
};

// SPDZ-style online phase for one party. Not thread safe: all calls must
// come from the party's protocol thread, in the same order at every party.
class Engine {
 public:
  Engine(net::Session& session, PartyMaterial& material,
         EngineOptions options = {});

  int party_id() const { return session_.party_id(); }
  int n_parties() const { return session_.n_parties(); }
  const PrimeField& field() const { return material_.field(); }
  const FixedPointParams& params() const { return material_.params(); }
  PartyMaterial& material() { return material_; }
  net::Session& session() { return session_; }
  const EngineCounters& counters() const { return counters_; }

  // ---- local operations
  // Sharing of a public constant (party 0 absorbs the value).
  AuthShare Constant(const FieldElement& c) const;
  AuthShare AddPublic(const AuthShare& a, const FieldElement& c) const;

  // ---- interactive operations
  // Secret-shares the owner's values; one round regardless of count.
  std::vector<AuthShare> Input(int owner, std::span<const FieldElement> values,
                               std::size_t count);
  // Several owners in a single round.
  std::vector<std::vector<AuthShare>> InputBatch(
      const std::vector<InputRequest>& requests);

  // Opens every element in one round. MACs are checked later.
  std::vector<FieldElement> Open(std::span<const AuthShare> shares);

  // Elementwise products via Beaver triples; one round.
  std::vector<AuthShare> Mul(std::span<const AuthShare> x,
                             std::span<const AuthShare> y);

  // Checks all pending openings. Four rounds when anything is pending.
  // Throws MacCheckError on failure.
  void MacCheck();
  std::size_t pending_openings() const { return pending_.size(); }

  // Final check; call once at the end of a protocol.
  void Finish() { MacCheck(); }

 private:
  struct OpenRecord {
    FieldElement opened;
    FieldElement mac_share;
  };

  void AppendElement(net::Bytes& out, const FieldElement& e) const;
  FieldElement ReadElement(const net::Bytes& in, std::size_t index) const;
  // Commit-and-reveal of a payload, returns everyone's revealed payload.
  std::vector<net::Bytes> CommitReveal(const net::Bytes& payload);

  net::Session& session_;
  PartyMaterial& material_;
  EngineOptions options_;
  EngineCounters counters_;
  std::vector<OpenRecord> pending_;
  Prg coin_;
  std::optional<FieldElement> tamper_delta_;
};

}  // namespace mpml
