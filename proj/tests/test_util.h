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

#include <cmath>
#include <functional>
#include <vector>

#include "mpml/runner.h"
#include "mpml/secure_fixed.h"

namespace mpml::testing {

inline LocalRunConfig LocalCfg(int n, const FixedPointParams& params,
                               uint64_t seed = 1) {
  LocalRunConfig cfg;
  cfg.n_parties = n;
  cfg.params = params;
  cfg.field = &DefaultFieldFor(params);
  cfg.dealer_seed = seed;
  cfg.engine.coin_seed = seed;
  return cfg;
}

// Runs fn at every party over loopback and returns each party's output.
inline std::vector<std::vector<double>> RunSecure(
    const LocalRunConfig& cfg,
    const std::function<std::vector<double>(SecureBackend&)>& fn,
    NonlinearOptions nl = {}) {
  auto outs = RunLocal(cfg, [&](Engine& e) {
    SecureBackend sb(e, nl);
    return fn(sb);
  });
  std::vector<std::vector<double>> r;
  for (auto& o : outs) r.push_back(o.result);
  return r;
}

// Party 0's output after checking every party opened the same values.
inline std::vector<double> RunSecure1(
    int n, const FixedPointParams& params,
    const std::function<std::vector<double>(SecureBackend&)>& fn,
    uint64_t seed = 1) {
  auto all = RunSecure(LocalCfg(n, params, seed), fn);
  for (const auto& o : all) {
    if (o != all.front()) throw std::runtime_error("parties disagree");
  }
  return all.front();
}

inline double MaxAbsDiff(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return a.size() == b.size() ? m : INFINITY;
}

}  // namespace mpml::testing
