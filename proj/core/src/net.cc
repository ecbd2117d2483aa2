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

#include "mpml/net.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include "mpml/errors.h"

namespace mpml::net {
namespace {

using Clock = std::chrono::steady_clock;

constexpr uint32_t kMaxFrame = 1U << 30;

void PutU16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutU64(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t GetLe(std::span<const uint8_t> in, std::size_t pos, int width) {
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
  }
  return v;
}

}  // namespace

const char* MsgTypeName(MsgType t) {
  switch (t) {
    case MsgType::kInputBroadcast: return "INPUT_BROADCAST";
    case MsgType::kOpenBatch: return "OPEN_BATCH";
    case MsgType::kCommit: return "COMMIT";
    case MsgType::kReveal: return "REVEAL";
    case MsgType::kSync: return "SYNC";
    case MsgType::kAbort: return "ABORT";
  }
  return "UNKNOWN";
}

void PartyConfig::Validate(bool need_endpoints) const {
  MPML_ENFORCE(n_parties >= 2 && n_parties <= 4, ConfigError,
               "n_parties must be in 2..4, got " + std::to_string(n_parties));
  MPML_ENFORCE(party_id >= 0 && party_id < n_parties, ConfigError,
               "party id " + std::to_string(party_id) + " out of range");
  MPML_ENFORCE(session_id.size() < 65536, ConfigError, "session id too long");
  if (need_endpoints) {
    MPML_ENFORCE(endpoints.size() == static_cast<std::size_t>(n_parties),
                 ConfigError, "need exactly one endpoint per party");
    std::set<std::string> uniq(endpoints.begin(), endpoints.end());
    MPML_ENFORCE(uniq.size() == endpoints.size(), ConfigError,
                 "duplicate endpoints");
  }
}

Bytes WireMessage::Encode() const {
  MPML_ENFORCE(payload.size() < kMaxFrame, ProtocolError, "payload too large");
  Bytes out;
  out.reserve(2 + session_id.size() + 8 + 1 + 4 + payload.size());
  PutU16(out, static_cast<uint16_t>(session_id.size()));
  out.insert(out.end(), session_id.begin(), session_id.end());
  PutU64(out, round_index);
  out.push_back(static_cast<uint8_t>(type));
  PutU32(out, static_cast<uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

WireMessage WireMessage::Decode(std::span<const uint8_t> frame) {
  auto need = [&](std::size_t pos, std::size_t len) {
    MPML_ENFORCE(pos + len <= frame.size(), ProtocolError, "truncated frame");
  };
  WireMessage m;
  need(0, 2);
  std::size_t sid_len = GetLe(frame, 0, 2);
  need(2, sid_len + 13);
  m.session_id.assign(frame.begin() + 2, frame.begin() + 2 + sid_len);
  std::size_t pos = 2 + sid_len;
  m.round_index = GetLe(frame, pos, 8);
  uint8_t t = frame[pos + 8];
  MPML_ENFORCE(t >= 1 && t <= 6, ProtocolError, "unknown message type");
  m.type = static_cast<MsgType>(t);
  std::size_t len = GetLe(frame, pos + 9, 4);
  pos += 13;
  MPML_ENFORCE(pos + len == frame.size(), ProtocolError,
               "payload length mismatch");
  m.payload.assign(frame.begin() + pos, frame.end());
  return m;
}

uint64_t NetStats::total_sent() const {
  uint64_t t = 0;
  for (auto b : bytes_sent) t += b;
  return t;
}

uint64_t NetStats::total_received() const {
  uint64_t t = 0;
  for (auto b : bytes_received) t += b;
  return t;
}

// ---------------------------------------------------------------- loopback

struct LoopbackHub::State {
  int n = 0;
  std::chrono::milliseconds timeout{};
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::deque<Bytes>> queues;  // [from * n + to]
  std::vector<bool> closed;
};

namespace {

class LoopbackTransport : public Transport {
 public:
  LoopbackTransport(std::shared_ptr<LoopbackHub::State> st, int id)
      : st_(std::move(st)), id_(id) {}
  ~LoopbackTransport() override { Close(); }

  int party_id() const override { return id_; }
  int n_parties() const override { return st_->n; }

  std::vector<Bytes> Exchange(const std::vector<Bytes>& outgoing) override {
    const int n = st_->n;
    std::unique_lock lock(st_->mu);
    MPML_ENFORCE(!st_->closed[id_], ConnectionError, "transport closed");
    for (int j = 0; j < n; ++j) {
      if (j != id_) st_->queues[id_ * n + j].push_back(outgoing[j]);
    }
    st_->cv.notify_all();
    std::vector<Bytes> in(n);
    auto deadline = Clock::now() + st_->timeout;
    for (int j = 0; j < n; ++j) {
      if (j == id_) continue;
      auto& q = st_->queues[j * n + id_];
      bool ok = st_->cv.wait_until(lock, deadline, [&] {
        return !q.empty() || st_->closed[j] || st_->closed[id_];
      });
      if (!q.empty()) {
        in[j] = std::move(q.front());
        q.pop_front();
        continue;
      }
      if (!ok) {
        throw ConnectionError("timeout waiting for party " + std::to_string(j));
      }
      throw ConnectionError("party " + std::to_string(j) + " disconnected");
    }
    return in;
  }

  void Post(int peer, const Bytes& frame) noexcept override {
    try {
      std::lock_guard lock(st_->mu);
      st_->queues[id_ * st_->n + peer].push_back(frame);
      st_->cv.notify_all();
    } catch (...) {
    }
  }

  void Close() override {
    std::lock_guard lock(st_->mu);
    st_->closed[id_] = true;
    st_->cv.notify_all();
  }

 private:
  std::shared_ptr<LoopbackHub::State> st_;
  int id_;
};

}  // namespace

LoopbackHub::LoopbackHub(int n_parties, std::chrono::milliseconds timeout)
    : state_(std::make_shared<State>()) {
  MPML_ENFORCE(n_parties >= 2 && n_parties <= 4, ConfigError,
               "n_parties must be in 2..4");
  state_->n = n_parties;
  state_->timeout = timeout;
  state_->queues.resize(static_cast<std::size_t>(n_parties * n_parties));
  state_->closed.assign(static_cast<std::size_t>(n_parties), false);
}

std::unique_ptr<Transport> LoopbackHub::Endpoint(int party_id) {
  MPML_ENFORCE(party_id >= 0 && party_id < state_->n, ConfigError,
               "party id out of range");
  return std::make_unique<LoopbackTransport>(state_, party_id);
}

// --------------------------------------------------------------------- tcp

namespace {

struct HostPort {
  std::string host;
  std::string port;
};

HostPort SplitEndpoint(const std::string& ep) {
  auto colon = ep.rfind(':');
  MPML_ENFORCE(colon != std::string::npos && colon + 1 < ep.size(),
               ConfigError, "endpoint must be host:port, got '" + ep + "'");
  return {ep.substr(0, colon), ep.substr(colon + 1)};
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) freeaddrinfo(head);
  }
};

void Resolve(const HostPort& hp, bool passive, AddrInfo& out) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  int rc = getaddrinfo(hp.host.empty() ? nullptr : hp.host.c_str(),
                       hp.port.c_str(), &hints, &out.head);
  MPML_ENFORCE(rc == 0 && out.head, ConnectionError,
               "cannot resolve " + hp.host + ":" + hp.port + ": " +
                   gai_strerror(rc));
}

void SetNonBlocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void SetNoDelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

int RemainingMs(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return static_cast<int>(std::max<int64_t>(0, left.count()));
}

// Blocking-with-deadline read of exactly len bytes.
void ReadExact(int fd, uint8_t* buf, std::size_t len,
               Clock::time_point deadline) {
  std::size_t got = 0;
  while (got < len) {
    pollfd p{fd, POLLIN, 0};
    int rc = poll(&p, 1, RemainingMs(deadline));
    if (rc < 0 && errno == EINTR) continue;
    MPML_ENFORCE(rc > 0, ConnectionError, "timeout during connection setup");
    ssize_t r = recv(fd, buf + got, len - got, 0);
    if (r < 0 && (errno == EINTR || errno == EAGAIN)) continue;
    MPML_ENFORCE(r > 0, ConnectionError, "peer closed during setup");
    got += static_cast<std::size_t>(r);
  }
}

class TcpTransport : public Transport {
 public:
  TcpTransport(int id, int n, std::vector<int> fds,
               std::chrono::milliseconds timeout)
      : id_(id), n_(n), fds_(std::move(fds)), timeout_(timeout) {}
  ~TcpTransport() override { Close(); }

  int party_id() const override { return id_; }
  int n_parties() const override { return n_; }

  std::vector<Bytes> Exchange(const std::vector<Bytes>& outgoing) override {
    struct PeerIo {
      Bytes out;
      std::size_t sent = 0;
      uint8_t hdr[4]{};
      std::size_t hdr_got = 0;
      Bytes in;
      std::size_t in_got = 0;
      bool have_len = false;
      bool done_in = false;
    };
    std::vector<PeerIo> io(n_);
    for (int j = 0; j < n_; ++j) {
      if (j == id_) continue;
      MPML_ENFORCE(fds_[j] >= 0, ConnectionError, "transport closed");
      io[j].out.reserve(4 + outgoing[j].size());
      PutU32(io[j].out, static_cast<uint32_t>(outgoing[j].size()));
      io[j].out.insert(io[j].out.end(), outgoing[j].begin(), outgoing[j].end());
    }
    auto deadline = Clock::now() + timeout_;
    for (;;) {
      std::vector<pollfd> pfds;
      std::vector<int> who;
      for (int j = 0; j < n_; ++j) {
        if (j == id_) continue;
        short ev = 0;
        if (io[j].sent < io[j].out.size()) ev |= POLLOUT;
        if (!io[j].done_in) ev |= POLLIN;
        if (ev == 0) continue;
        pfds.push_back({fds_[j], ev, 0});
        who.push_back(j);
      }
      if (pfds.empty()) break;
      int rc = poll(pfds.data(), pfds.size(), RemainingMs(deadline));
      if (rc < 0 && errno == EINTR) continue;
      MPML_ENFORCE(rc > 0, ConnectionError, "timeout waiting for peers");
      for (std::size_t t = 0; t < pfds.size(); ++t) {
        int j = who[t];
        auto& p = io[j];
        if (pfds[t].revents & POLLOUT) {
          ssize_t w = send(fds_[j], p.out.data() + p.sent, p.out.size() - p.sent,
                           MSG_NOSIGNAL);
          if (w < 0 && errno != EAGAIN && errno != EINTR) {
            throw ConnectionError("send to party " + std::to_string(j) +
                                  " failed: " + std::strerror(errno));
          }
          if (w > 0) p.sent += static_cast<std::size_t>(w);
        }
        if (pfds[t].revents & (POLLIN | POLLHUP | POLLERR)) {
          ReadSome(j, p.hdr, p.hdr_got, p.have_len, p.in, p.in_got, p.done_in);
        }
      }
    }
    std::vector<Bytes> in(n_);
    for (int j = 0; j < n_; ++j) {
      if (j != id_) in[j] = std::move(io[j].in);
    }
    return in;
  }

  void Post(int peer, const Bytes& frame) noexcept override {
    if (peer < 0 || peer >= n_ || fds_[peer] < 0) return;
    Bytes out;
    out.reserve(4 + frame.size());
    PutU32(out, static_cast<uint32_t>(frame.size()));
    out.insert(out.end(), frame.begin(), frame.end());
    (void)send(fds_[peer], out.data(), out.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
  }

  void Close() override {
    for (int& fd : fds_) {
      if (fd >= 0) {
        shutdown(fd, SHUT_RDWR);
        close(fd);
        fd = -1;
      }
    }
  }

 private:
  void ReadSome(int j, uint8_t* hdr, std::size_t& hdr_got, bool& have_len,
                Bytes& in, std::size_t& in_got, bool& done) {
    uint8_t* dst = nullptr;
    std::size_t want = 0;
    if (!have_len) {
      dst = hdr + hdr_got;
      want = 4 - hdr_got;
    } else {
      dst = in.data() + in_got;
      want = in.size() - in_got;
    }
    ssize_t r = want == 0 ? 0 : recv(fds_[j], dst, want, 0);
    if (want != 0) {
      if (r < 0 && (errno == EAGAIN || errno == EINTR)) return;
      if (r <= 0) {
        throw ConnectionError("party " + std::to_string(j) + " disconnected");
      }
    }
    if (!have_len) {
      hdr_got += static_cast<std::size_t>(r);
      if (hdr_got == 4) {
        uint32_t len = static_cast<uint32_t>(GetLe({hdr, 4}, 0, 4));
        MPML_ENFORCE(len < kMaxFrame, ProtocolError, "oversized frame");
        in.assign(len, 0);
        in_got = 0;
        have_len = true;
        if (len == 0) done = true;
      }
    } else {
      in_got += static_cast<std::size_t>(r);
      if (in_got == in.size()) done = true;
    }
  }

  int id_;
  int n_;
  std::vector<int> fds_;
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::unique_ptr<Transport> ConnectTcp(const PartyConfig& config) {
  config.Validate(true);
  const int id = config.party_id;
  const int n = config.n_parties;
  auto deadline = Clock::now() + config.timeout;
  std::vector<int> fds(n, -1);
  auto cleanup = [&](int listener) {
    if (listener >= 0) close(listener);
    for (int& fd : fds) {
      if (fd >= 0) close(fd);
      fd = -1;
    }
  };

  int listener = -1;
  if (id < n - 1) {
    HostPort hp = SplitEndpoint(config.endpoints[id]);
    AddrInfo ai;
    Resolve({"", hp.port}, true, ai);
    listener = socket(AF_INET, SOCK_STREAM, 0);
    MPML_ENFORCE(listener >= 0, ConnectionError, "socket() failed");
    int one = 1;
    setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (bind(listener, ai.head->ai_addr, ai.head->ai_addrlen) != 0 ||
        listen(listener, n) != 0) {
      std::string err = std::strerror(errno);
      cleanup(listener);
      throw ConnectionError("cannot listen on " + config.endpoints[id] + ": " +
                            err);
    }
  }

  try {
    for (int j = 0; j < id; ++j) {
      HostPort hp = SplitEndpoint(config.endpoints[j]);
      for (;;) {
        AddrInfo ai;
        Resolve(hp, false, ai);
        int fd = socket(AF_INET, SOCK_STREAM, 0);
        MPML_ENFORCE(fd >= 0, ConnectionError, "socket() failed");
        if (connect(fd, ai.head->ai_addr, ai.head->ai_addrlen) == 0) {
          fds[j] = fd;
          break;
        }
        close(fd);
        MPML_ENFORCE(Clock::now() < deadline, ConnectionError,
                     "timeout connecting to party " + std::to_string(j) +
                         " at " + config.endpoints[j]);
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
      Bytes hello;
      PutU16(hello, static_cast<uint16_t>(id));
      MPML_ENFORCE(send(fds[j], hello.data(), hello.size(), MSG_NOSIGNAL) == 2,
                   ConnectionError, "handshake send failed");
    }
    for (int accepted = 0; accepted < n - 1 - id; ++accepted) {
      pollfd p{listener, POLLIN, 0};
      int rc = poll(&p, 1, RemainingMs(deadline));
      MPML_ENFORCE(rc > 0, ConnectionError, "timeout waiting for peers");
      int fd = accept(listener, nullptr, nullptr);
      MPML_ENFORCE(fd >= 0, ConnectionError, "accept() failed");
      uint8_t hello[2];
      try {
        ReadExact(fd, hello, 2, deadline);
      } catch (...) {
        close(fd);
        throw;
      }
      int peer = hello[0] | (hello[1] << 8);
      if (peer <= id || peer >= n || fds[peer] >= 0) {
        close(fd);
        throw ConnectionError("unexpected peer id " + std::to_string(peer));
      }
      fds[peer] = fd;
    }
  } catch (...) {
    cleanup(listener);
    throw;
  }
  if (listener >= 0) close(listener);
  for (int fd : fds) {
    if (fd < 0) continue;
    SetNoDelay(fd);
    SetNonBlocking(fd);
  }
  return std::make_unique<TcpTransport>(id, n, std::move(fds), config.timeout);
}

// ----------------------------------------------------------------- session

Session::Session(PartyConfig config, std::unique_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.Validate(false);
  MPML_ENFORCE(transport_ && transport_->party_id() == config_.party_id &&
                   transport_->n_parties() == config_.n_parties,
               ConfigError, "transport does not match party config");
  stats_.bytes_sent.assign(config_.n_parties, 0);
  stats_.bytes_received.assign(config_.n_parties, 0);
  online_start_ = Clock::now();
}

Session::~Session() {
  if (transport_) transport_->Close();
}

void Session::Handshake(const Digest& params_digest) {
  auto payloads = ExchangeFrames(0, MsgType::kSync, params_digest, false);
  for (int j = 0; j < n_parties(); ++j) {
    if (payloads[j].size() != params_digest.size() ||
        !std::equal(payloads[j].begin(), payloads[j].end(),
                    params_digest.begin())) {
      Abort("parameter digest mismatch");
      throw ProtocolError("parameter digest mismatch with party " +
                          std::to_string(j));
    }
  }
  online_start_ = Clock::now();
}

std::vector<Bytes> Session::BroadcastRound(MsgType type,
                                           std::span<const uint8_t> payload) {
  uint64_t round = next_round_++;
  auto payloads = ExchangeFrames(round, type, payload, true);
  ++stats_.rounds;
  transcript_.UpdateU64(round).UpdateU64(static_cast<uint64_t>(type));
  for (const auto& p : payloads) {
    transcript_.UpdateU64(p.size()).Update(std::span<const uint8_t>(p));
  }
  stats_.online_seconds =
      std::chrono::duration<double>(Clock::now() - online_start_).count();
  return payloads;
}

std::vector<Bytes> Session::ExchangeFrames(uint64_t round, MsgType type,
                                           std::span<const uint8_t> payload,
                                           bool count) {
  MPML_ENFORCE(!aborted_, ProtocolError, "session already aborted");
  const int n = n_parties();
  const int self = party_id();
  WireMessage msg{config_.session_id, round, type,
                  Bytes(payload.begin(), payload.end())};
  Bytes frame = msg.Encode();
  std::vector<Bytes> outgoing(n);
  for (int j = 0; j < n; ++j) {
    if (j != self) outgoing[j] = frame;
  }
  std::vector<Bytes> result(n);
  try {
    auto incoming = transport_->Exchange(outgoing);
    for (int j = 0; j < n; ++j) {
      if (j == self) continue;
      WireMessage in = WireMessage::Decode(incoming[j]);
      if (in.type == MsgType::kAbort) {
        throw ProtocolError(
            "party " + std::to_string(j) + " aborted: " +
            std::string(in.payload.begin(), in.payload.end()));
      }
      MPML_ENFORCE(in.session_id == config_.session_id, ProtocolError,
                   "session id mismatch with party " + std::to_string(j));
      MPML_ENFORCE(in.round_index == round && in.type == type, ProtocolError,
                   "round skew with party " + std::to_string(j) + ": got " +
                       MsgTypeName(in.type) + " #" +
                       std::to_string(in.round_index) + ", expected " +
                       MsgTypeName(type) + " #" + std::to_string(round));
      if (count) {
        stats_.bytes_sent[j] += frame.size();
        stats_.bytes_received[j] += incoming[j].size();
      }
      result[j] = std::move(in.payload);
    }
  } catch (const std::exception& e) {
    Abort(e.what());
    throw;
  }
  result[self] = std::move(msg.payload);
  return result;
}

void Session::Abort(const std::string& reason) noexcept {
  if (aborted_) return;
  aborted_ = true;
  try {
    WireMessage msg{config_.session_id, next_round_, MsgType::kAbort,
                    Bytes(reason.begin(), reason.end())};
    Bytes frame = msg.Encode();
    for (int j = 0; j < n_parties(); ++j) {
      if (j != party_id()) transport_->Post(j, frame);
    }
  } catch (...) {
  }
  transport_->Close();
}

Digest Session::TranscriptDigest() const {
  Sha256 copy = transcript_;
  return copy.Final();
}

std::unique_ptr<Session> ConnectAll(const PartyConfig& config,
                                    const Digest& params_digest) {
  auto session = std::make_unique<Session>(config, ConnectTcp(config));
  session->Handshake(params_digest);
  return session;
}

}  // namespace mpml::net
