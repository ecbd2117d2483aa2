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

// Runs every party of a protocol inside one process, one thread per party.

#pragma once

#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "mpml/dealer.h"
#include "mpml/engine.h"
#include "mpml/net.h"

namespace mpml {

enum class TransportKind { kLoopback, kTcp };

TransportKind ParseTransport(const std::string& name);

struct PartyReport {
  int party = 0;
  net::NetStats stats;
  Budget consumed;
  EngineCounters counters;
  double material_seconds = 0.0;
  Digest transcript{};
};

// Digest of everything the parties must agree on before the first round.
Digest ParamsDigest(const PrimeField& field, const FixedPointParams& params,
                    int n_parties, const std::string& descriptor);

// Free TCP ports on 127.0.0.1, one per party.
std::vector<std::string> LocalEndpoints(int n_parties);

struct LocalRunConfig {
  int n_parties = 2;
  const PrimeField* field = nullptr;
  FixedPointParams params;
  uint64_t dealer_seed = 1;
  EngineOptions engine;
  TransportKind transport = TransportKind::kLoopback;
  std::string session_id = "mpml";
  // Agreed in the handshake; a party whose entry differs aborts the run.
  std::string descriptor;
  std::vector<std::string> per_party_descriptor;  // test override
  std::optional<Budget> limit;
  // When set, material is loaded from "<prefix>.p<i>.bin" instead of the
  // inline dealer.
  std::string material_prefix;
};

// Material for one party as configured.
std::unique_ptr<PartyMaterial> MakeMaterial(const LocalRunConfig& cfg,
                                            int party);

// Among per-party failures, the one that caused the others: peers of an
// aborting party only see protocol or connection errors.
std::exception_ptr RootCause(const std::vector<std::exception_ptr>& errors);

// Transport endpoints for all parties (loopback or TCP connections that are
// established by each party thread).
class LocalNetwork {
 public:
  explicit LocalNetwork(const LocalRunConfig& cfg);
  ~LocalNetwork();
  std::unique_ptr<net::Session> Connect(int party);

 private:
  const LocalRunConfig& cfg_;
  std::unique_ptr<net::LoopbackHub> hub_;
  std::vector<std::string> endpoints_;
};

template <class R>
struct PartyOutcome {
  R result;
  PartyReport report;
};

// fn(Engine&) runs at every party; Finish() (the final MAC check) is called
// after it returns. The root failure is rethrown once all threads joined.
template <class Fn>
auto RunLocal(const LocalRunConfig& cfg, Fn fn)
    -> std::vector<PartyOutcome<std::invoke_result_t<Fn&, Engine&>>> {
  using R = std::invoke_result_t<Fn&, Engine&>;
  const int n = cfg.n_parties;
  LocalNetwork network(cfg);
  std::vector<std::optional<PartyOutcome<R>>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (int p = 0; p < n; ++p) {
    threads.emplace_back([&, p] {
      std::unique_ptr<net::Session> session;
      try {
        session = network.Connect(p);
        auto material = MakeMaterial(cfg, p);
        Engine engine(*session, *material, cfg.engine);
        R r = fn(engine);
        engine.Finish();
        PartyReport rep;
        rep.party = p;
        rep.stats = session->stats();
        rep.consumed = material->consumed();
        rep.counters = engine.counters();
        rep.material_seconds = material->material_seconds();
        rep.transcript = session->TranscriptDigest();
        slots[p].emplace(PartyOutcome<R>{std::move(r), std::move(rep)});
      } catch (const std::exception& e) {
        errors[p] = std::current_exception();
        if (session) session->Abort(e.what());
      }
    });
  }
  for (auto& t : threads) t.join();
  if (auto root = RootCause(errors)) std::rethrow_exception(root);
  std::vector<PartyOutcome<R>> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace mpml
