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

#include "mpml/runner.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "mpml/errors.h"

namespace mpml {

TransportKind ParseTransport(const std::string& name) {
  if (name == "loopback") return TransportKind::kLoopback;
  if (name == "tcp") return TransportKind::kTcp;
  throw ConfigError("unknown transport '" + name + "' (loopback|tcp)");
}

Digest ParamsDigest(const PrimeField& field, const FixedPointParams& params,
                    int n_parties, const std::string& descriptor) {
  Sha256 h;
  h.Update("mpml-params");
  h.Update(field.modulus().str());
  h.UpdateU64(static_cast<uint64_t>(params.f));
  h.UpdateU64(static_cast<uint64_t>(params.k));
  h.UpdateU64(static_cast<uint64_t>(params.s));
  h.UpdateU64(static_cast<uint64_t>(n_parties));
  h.Update(descriptor);
  return h.Final();
}

std::vector<std::string> LocalEndpoints(int n_parties) {
  // Hold all sockets open until every port is chosen so none repeats.
  std::vector<int> fds;
  std::vector<std::string> out;
  for (int i = 0; i < n_parties; ++i) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
      for (int f : fds) ::close(f);
      throw ConnectionError("socket() failed");
    }
    fds.push_back(fd);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    socklen_t len = sizeof(addr);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
      for (int f : fds) ::close(f);
      throw ConnectionError("cannot reserve a local port");
    }
    out.push_back("127.0.0.1:" + std::to_string(ntohs(addr.sin_port)));
  }
  for (int f : fds) ::close(f);
  return out;
}

std::unique_ptr<PartyMaterial> MakeMaterial(const LocalRunConfig& cfg,
                                            int party) {
  MPML_ENFORCE(cfg.field != nullptr, ConfigError, "no field configured");
  if (!cfg.material_prefix.empty()) {
    return Dealer::OpenFile(
        cfg.material_prefix + ".p" + std::to_string(party) + ".bin", party,
        cfg.n_parties, *cfg.field, cfg.params);
  }
  Dealer dealer({cfg.field, cfg.params, cfg.n_parties, cfg.dealer_seed});
  return dealer.Inline(party, cfg.limit ? &*cfg.limit : nullptr);
}

std::exception_ptr RootCause(const std::vector<std::exception_ptr>& errors) {
  std::exception_ptr fallback;
  for (const auto& e : errors) {
    if (!e) continue;
    if (!fallback) fallback = e;
    try {
      std::rethrow_exception(e);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kProtocol &&
          err.kind() != ErrorKind::kConnection) {
        return e;
      }
    } catch (...) {
      return e;
    }
  }
  return fallback;
}

LocalNetwork::LocalNetwork(const LocalRunConfig& cfg) : cfg_(cfg) {
  MPML_ENFORCE(cfg.n_parties >= 2, ConfigError, "need at least two parties");
  if (cfg.transport == TransportKind::kLoopback) {
    hub_ = std::make_unique<net::LoopbackHub>(cfg.n_parties);
  } else {
    endpoints_ = LocalEndpoints(cfg.n_parties);
  }
}

LocalNetwork::~LocalNetwork() = default;

std::unique_ptr<net::Session> LocalNetwork::Connect(int party) {
  net::PartyConfig pc;
  pc.party_id = party;
  pc.n_parties = cfg_.n_parties;
  pc.session_id = cfg_.session_id;
  pc.endpoints = endpoints_;
  std::unique_ptr<net::Transport> transport =
      hub_ ? hub_->Endpoint(party) : net::ConnectTcp(pc);
  auto session = std::make_unique<net::Session>(pc, std::move(transport));
  std::string desc = cfg_.descriptor;
  if (static_cast<std::size_t>(party) < cfg_.per_party_descriptor.size()) {
    desc = cfg_.per_party_descriptor[party];
  }
  session->Handshake(
      ParamsDigest(*cfg_.field, cfg_.params, cfg_.n_parties, desc));
  return session;
}

}  // namespace mpml
