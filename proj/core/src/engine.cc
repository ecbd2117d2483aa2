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

#include "mpml/engine.h"

#include <algorithm>

#include "mpml/errors.h"

namespace mpml {

Engine::Engine(net::Session& session, PartyMaterial& material,
               EngineOptions options)
    : session_(session),
      material_(material),
      options_(std::move(options)),
      coin_(Prg::Derive(options_.coin_seed, "engine/coin",
                        {static_cast<uint64_t>(session.party_id())})) {
  MPML_ENFORCE(material_.party_id() == session_.party_id() &&
                   material_.n_parties() == session_.n_parties(),
               ConfigError, "preprocessing material belongs to another party");
  if (options_.tamper && options_.tamper->party == party_id()) {
    tamper_delta_ = field().FromSigned(options_.tamper->delta);
  }
}

AuthShare Engine::Constant(const FieldElement& c) const {
  AuthShare s{party_id() == 0 ? c : field().Zero(),
              material_.mac_key_share() * c};
  return s;
}

AuthShare Engine::AddPublic(const AuthShare& a, const FieldElement& c) const {
  AuthShare s = a;
  if (party_id() == 0) s.value += c;
  s.mac += material_.mac_key_share() * c;
  return s;
}

void Engine::AppendElement(net::Bytes& out, const FieldElement& e) const {
  std::size_t w = field().byte_length();
  std::size_t pos = out.size();
  out.resize(pos + w);
  e.ToBytes(std::span<uint8_t>(out.data() + pos, w));
}

FieldElement Engine::ReadElement(const net::Bytes& in, std::size_t index) const {
  std::size_t w = field().byte_length();
  MPML_ENFORCE((index + 1) * w <= in.size(), ProtocolError,
               "short payload from peer");
  return field().FromBytes(std::span<const uint8_t>(in.data() + index * w, w));
}

std::vector<AuthShare> Engine::Input(int owner,
                                     std::span<const FieldElement> values,
                                     std::size_t count) {
  InputRequest req;
  req.owner = owner;
  req.count = count;
  if (owner == party_id()) req.values.assign(values.begin(), values.end());
  return std::move(InputBatch({req})[0]);
}

std::vector<std::vector<AuthShare>> Engine::InputBatch(
    const std::vector<InputRequest>& requests) {
  std::vector<std::vector<MaskShare>> masks(requests.size());
  net::Bytes payload;
  std::size_t total = 0;
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const auto& req = requests[r];
    MPML_ENFORCE(req.owner >= 0 && req.owner < n_parties(), ConfigError,
                 "input owner out of range");
    total += req.count;
    masks[r].reserve(req.count);
    for (std::size_t i = 0; i < req.count; ++i) {
      masks[r].push_back(material_.TakeMask(req.owner));
    }
    if (req.owner == party_id()) {
      MPML_ENFORCE(req.values.size() == req.count, ConfigError,
                   "input owner supplied wrong number of values");
      for (std::size_t i = 0; i < req.count; ++i) {
        AppendElement(payload, req.values[i] - masks[r][i].clear);
      }
    }
  }
  std::vector<std::vector<AuthShare>> out(requests.size());
  if (total == 0) return out;
  auto all = session_.BroadcastRound(net::MsgType::kInputBroadcast, payload);
  ++counters_.input_rounds;
  counters_.input_elements += total;
  std::vector<std::size_t> cursor(n_parties(), 0);
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const auto& req = requests[r];
    const auto& from = all[req.owner];
    out[r].reserve(req.count);
    for (std::size_t i = 0; i < req.count; ++i) {
      FieldElement d = ReadElement(from, cursor[req.owner]++);
      out[r].push_back(AddPublic(masks[r][i].r, d));
    }
  }
  for (int j = 0; j < n_parties(); ++j) {
    MPML_ENFORCE(all[j].size() == cursor[j] * field().byte_length(),
                 ProtocolError,
                 "unexpected input payload size from party " +
                     std::to_string(j));
  }
  return out;
}

std::vector<FieldElement> Engine::Open(std::span<const AuthShare> shares) {
  std::vector<FieldElement> out;
  if (shares.empty()) return out;
  const uint64_t base = counters_.opened_elements;
  net::Bytes payload;
  payload.reserve(shares.size() * field().byte_length());
  std::vector<FieldElement> macs;
  macs.reserve(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    FieldElement v = shares[i].value;
    FieldElement m = shares[i].mac;
    if (tamper_delta_ && base + i == options_.tamper->opening_index) {
      (options_.tamper->mac ? m : v) += *tamper_delta_;
    }
    AppendElement(payload, v);
    macs.push_back(m);
  }
  auto all = session_.BroadcastRound(net::MsgType::kOpenBatch, payload);
  for (int j = 0; j < n_parties(); ++j) {
    MPML_ENFORCE(all[j].size() == payload.size(), ProtocolError,
                 "opening payload size mismatch from party " +
                     std::to_string(j));
  }
  out.assign(shares.size(), field().Zero());
  for (int j = 0; j < n_parties(); ++j) {
    for (std::size_t i = 0; i < shares.size(); ++i) {
      out[i] += ReadElement(all[j], i);
    }
  }
  for (std::size_t i = 0; i < shares.size(); ++i) {
    pending_.push_back({out[i], macs[i]});
  }
  ++counters_.open_rounds;
  counters_.opened_elements += shares.size();
  if (options_.mac_check_interval > 0 &&
      pending_.size() >= options_.mac_check_interval) {
    MacCheck();
  }
  return out;
}

std::vector<AuthShare> Engine::Mul(std::span<const AuthShare> x,
                                   std::span<const AuthShare> y) {
  MPML_ENFORCE(x.size() == y.size(), ConfigError, "Mul size mismatch");
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::vector<Triple> triples;
  triples.reserve(n);
  std::vector<AuthShare> masked;
  masked.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    triples.push_back(material_.TakeTriple());
    masked.push_back(x[i] - triples[i].a);
    masked.push_back(y[i] - triples[i].b);
  }
  auto opened = Open(masked);
  std::vector<AuthShare> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FieldElement& eps = opened[2 * i];
    const FieldElement& del = opened[2 * i + 1];
    AuthShare z = triples[i].c + triples[i].b * eps + triples[i].a * del;
    out.push_back(AddPublic(z, eps * del));
  }
  counters_.multiplications += n;
  return out;
}

std::vector<net::Bytes> Engine::CommitReveal(const net::Bytes& payload) {
  uint8_t nonce[32];
  coin_.Fill(nonce);
  Digest commit = Sha256()
                      .Update("mpml-commit")
                      .UpdateU64(static_cast<uint64_t>(party_id()))
                      .Update(std::span<const uint8_t>(nonce, 32))
                      .Update(std::span<const uint8_t>(payload))
                      .Final();
  auto commits = session_.BroadcastRound(net::MsgType::kCommit, commit);
  net::Bytes opening(nonce, nonce + 32);
  opening.insert(opening.end(), payload.begin(), payload.end());
  auto reveals = session_.BroadcastRound(net::MsgType::kReveal, opening);
  counters_.mac_check_rounds += 2;
  std::vector<net::Bytes> out(n_parties());
  for (int j = 0; j < n_parties(); ++j) {
    const auto& rv = reveals[j];
    if (rv.size() < 32) throw MacCheckError("malformed reveal");
    Digest expect = Sha256()
                        .Update("mpml-commit")
                        .UpdateU64(static_cast<uint64_t>(j))
                        .Update(std::span<const uint8_t>(rv))
                        .Final();
    if (commits[j].size() != expect.size() ||
        !std::equal(expect.begin(), expect.end(), commits[j].begin())) {
      throw MacCheckError("commitment mismatch from party " +
                          std::to_string(j));
    }
    out[j].assign(rv.begin() + 32, rv.end());
  }
  return out;
}

void Engine::MacCheck() {
  if (pending_.empty()) return;
  // Joint random coefficients from committed per-party seeds.
  net::Bytes seed(32);
  coin_.Fill(seed);
  auto seeds = CommitReveal(seed);
  Sha256 joint;
  joint.Update("mpml-mac-coins");
  for (const auto& s : seeds) joint.Update(std::span<const uint8_t>(s));
  Prg coins(joint.Final(), counters_.mac_checks);

  FieldElement opened_sum = field().Zero();
  FieldElement mac_sum = field().Zero();
  for (const auto& rec : pending_) {
    FieldElement r = coins.NextField(field());
    opened_sum += r * rec.opened;
    mac_sum += r * rec.mac_share;
  }
  FieldElement sigma = mac_sum - material_.mac_key_share() * opened_sum;
  net::Bytes mine;
  AppendElement(mine, sigma);
  auto sigmas = CommitReveal(mine);
  FieldElement total = field().Zero();
  for (int j = 0; j < n_parties(); ++j) {
    if (sigmas[j].size() != field().byte_length()) {
      throw MacCheckError("malformed MAC check share");
    }
    total += ReadElement(sigmas[j], 0);
  }
  ++counters_.mac_checks;
  std::size_t checked = pending_.size();
  pending_.clear();
  if (!total.IsZero()) {
    session_.Abort("MAC check failed");
    throw MacCheckError("MAC check failed over " + std::to_string(checked) +
                        " openings: cheating detected");
  }
}

}  // namespace mpml
