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

#include "mpml/sgd.h"

#include <cmath>
#include <numeric>

#include "mpml/prg.h"

namespace mpml {

Activation Activation::Parse(const std::string& text) {
  Activation a;
  if (text == "linear") {
    a.kind = ActivationKind::kLinear;
  } else if (text == "piecewise") {
    a.kind = ActivationKind::kPiecewise;
  } else if (text == "exact") {
    a.kind = ActivationKind::kExact;
  } else if (text.rfind("taylor:", 0) == 0) {
    a.kind = ActivationKind::kTaylor;
    try {
      std::size_t used = 0;
      a.degree = std::stoi(text.substr(7), &used);
      if (used != text.size() - 7) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError("bad Taylor degree in '" + text + "'");
    }
    fxg::LogisticSeries(a.degree);  // validates the degree
  } else {
    throw ConfigError("unknown activation '" + text +
                      "' (linear|piecewise|taylor:D|exact)");
  }
  return a;
}

std::string Activation::Name() const {
  switch (kind) {
    case ActivationKind::kLinear:
      return "linear";
    case ActivationKind::kPiecewise:
      return "piecewise";
    case ActivationKind::kTaylor:
      return "taylor:" + std::to_string(degree);
    case ActivationKind::kExact:
      return "exact";
  }
  return "?";
}

void SgdConfig::Validate(std::size_t n) const {
  MPML_ENFORCE(learning_rate > 0, ConfigError, "learning rate must be > 0");
  MPML_ENFORCE(batch >= 1 && batch <= n, ConfigError,
               "batch size must be in [1, n] (n=" + std::to_string(n) + ")");
  MPML_ENFORCE(iterations > 0 || epochs >= 1, ConfigError,
               "need at least one step");
}

std::size_t SgdConfig::Steps(std::size_t n) const {
  Validate(n);
  if (iterations > 0) return iterations;
  return static_cast<std::size_t>(epochs) * (n / batch);
}

std::vector<std::vector<std::size_t>> BatchSchedule(std::size_t n,
                                                    const SgdConfig& cfg) {
  const std::size_t steps = cfg.Steps(n);
  const std::size_t per_epoch = n / cfg.batch;
  std::vector<std::vector<std::size_t>> out;
  out.reserve(steps);
  std::vector<std::size_t> perm(n);
  for (uint64_t epoch = 0; out.size() < steps; ++epoch) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Prg prg = Prg::Derive(cfg.shuffle_seed, "sgd/schedule", {epoch});
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[prg.NextBelow(i + 1)]);
    }
    for (std::size_t b = 0; b < per_epoch && out.size() < steps; ++b) {
      out.emplace_back(perm.begin() + b * cfg.batch,
                       perm.begin() + (b + 1) * cfg.batch);
    }
  }
  return out;
}

Metrics EvaluatePredictions(std::span<const double> pred,
                            std::span<const double> y, Task task) {
  MPML_ENFORCE(!y.empty() && pred.size() == y.size(), ConfigError,
               "evaluation needs a non-empty test set");
  Metrics m;
  double se = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double e = pred[i] - y[i];
    se += e * e;
    double label = pred[i] >= 0.5 ? 1.0 : 0.0;
    if (label == y[i]) ++correct;
  }
  m.rmse = std::sqrt(se / static_cast<double>(y.size()));
  if (task == Task::kClassification) {
    m.accuracy = static_cast<double>(correct) / static_cast<double>(y.size());
  }
  return m;
}

Metrics Evaluate(std::span<const double> w, const std::vector<double>& X,
                 std::size_t d, std::span<const double> y, Task task) {
  MPML_ENFORCE(w.size() == d && X.size() == d * y.size(), ConfigError,
               "evaluation: dimension mismatch");
  std::vector<double> pred(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < d; ++j) u += X[i * d + j] * w[j];
    pred[i] = task == Task::kClassification ? 1.0 / (1.0 + std::exp(-u)) : u;
  }
  return EvaluatePredictions(pred, y, task);
}

}  // namespace mpml
