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

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpml/prg.h"

namespace mpml::net {

using Bytes = std::vector<uint8_t>;

enum class MsgType : uint8_t {
  kInputBroadcast = 1,
  kOpenBatch = 2,
  kCommit = 3,
  kReveal = 4,
  kSync = 5,
  kAbort = 6,
};

const char* MsgTypeName(MsgType t);

struct PartyConfig {
  int party_id = 0;
  int n_parties = 2;
  // host:port per party, indexed by party id. Unused by loopback.
  std::vector<std::string> endpoints;
  std::string session_id = "mpml";
  std::chrono::milliseconds timeout{60000};

  void Validate(bool need_endpoints) const;
};

// One frame on the wire:
//   u16 session_id length | session_id | u64 round_index | u8 msg_type |
//   u32 payload length | payload            (all little-endian)
struct WireMessage {
  std::string session_id;
  uint64_t round_index = 0;
  MsgType type = MsgType::kSync;
  Bytes payload;

  Bytes Encode() const;
  static WireMessage Decode(std::span<const uint8_t> frame);
};

struct NetStats {
  uint64_t rounds = 0;
  std::vector<uint64_t> bytes_sent;      // per peer
  std::vector<uint64_t> bytes_received;  // per peer
  // Wall time between the end of the handshake and the last round.
  double online_seconds = 0.0;

  uint64_t total_sent() const;
  uint64_t total_received() const;
};

// Moves opaque frames between the parties of one session. All traffic is
// round-structured: every party calls Exchange once per round.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual int party_id() const = 0;
  virtual int n_parties() const = 0;
  // Sends outgoing[j] to every peer j != self and returns the frame received
  // from each peer (index self is left empty). Throws ConnectionError when a
  // peer disappears or the timeout elapses.
  virtual std::vector<Bytes> Exchange(const std::vector<Bytes>& outgoing) = 0;
  // Fire-and-forget delivery, used only for abort notices.
  virtual void Post(int peer, const Bytes& frame) noexcept = 0;
  // Unblocks peers waiting on this party. Idempotent.
  virtual void Close() = 0;
};

// In-process transport: every party is an activity in the same process and
// frames travel through shared queues.
class LoopbackHub {
 public:
  explicit LoopbackHub(int n_parties,
                       std::chrono::milliseconds timeout = std::chrono::minutes(2));

  std::unique_ptr<Transport> Endpoint(int party_id);

  struct State;

 private:
  std::shared_ptr<State> state_;
};

// Full-mesh TCP. Party i listens on endpoints[i], dials every lower id and
// accepts every higher id.
std::unique_ptr<Transport> ConnectTcp(const PartyConfig& config);

// Round-synchronized broadcast channel with accounting and a transcript hash.
class Session {
 public:
  Session(PartyConfig config, std::unique_ptr<Transport> transport);
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Every party must present the same parameter digest; mismatch aborts.
  void Handshake(const Digest& params_digest);

  // Broadcasts payload and returns all parties' payloads for this round,
  // ordered by party id (own payload included). Counts exactly one round.
  std::vector<Bytes> BroadcastRound(MsgType type,
                                    std::span<const uint8_t> payload);

  // Best-effort notification of peers followed by transport shutdown.
  void Abort(const std::string& reason) noexcept;

  int party_id() const { return config_.party_id; }
  int n_parties() const { return config_.n_parties; }
  const PartyConfig& config() const { return config_; }
  const NetStats& stats() const { return stats_; }

  // Hash over every round's (index, type, payloads in party order). Equal at
  // all parties of a run and independent of the transport.
  Digest TranscriptDigest() const;

 private:
  std::vector<Bytes> ExchangeFrames(uint64_t round, MsgType type,
                                    std::span<const uint8_t> payload,
                                    bool count);

  PartyConfig config_;
  std::unique_ptr<Transport> transport_;
  NetStats stats_;
  uint64_t next_round_ = 1;
  Sha256 transcript_;
  std::chrono::steady_clock::time_point online_start_;
  bool aborted_ = false;
};

// Connect + handshake over TCP.
std::unique_ptr<Session> ConnectAll(const PartyConfig& config,
                                    const Digest& params_digest);

}  // namespace mpml::net
