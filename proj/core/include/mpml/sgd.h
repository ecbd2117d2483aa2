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

// Mini-batch gradient descent for linear and logistic regression over any
// backend (see fx_generic.h).

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mpml/errors.h"
#include "mpml/fx_generic.h"

namespace mpml {

enum class ActivationKind { kLinear, kPiecewise, kTaylor, kExact };

struct Activation {
  ActivationKind kind = ActivationKind::kLinear;
  int degree = 0;  // Taylor only

  // "linear", "piecewise", "taylor:D", "exact"
  static Activation Parse(const std::string& text);
  std::string Name() const;
  friend bool operator==(const Activation&, const Activation&) = default;
};

struct SgdConfig {
  double learning_rate = 0.01;
  std::size_t batch = 64;
  int epochs = 10;
  // Total steps; 0 means epochs * floor(n / batch).
  std::size_t iterations = 0;
  Activation activation;
  uint64_t shuffle_seed = 1;

  void Validate(std::size_t n) const;
  std::size_t Steps(std::size_t n) const;
};

// Public batch order: each epoch is a seeded Fisher-Yates permutation cut
// into floor(n / batch) batches.
std::vector<std::vector<std::size_t>> BatchSchedule(std::size_t n,
                                                    const SgdConfig& cfg);

template <class B>
fxg::Vec<B> ApplyActivation(B& b, std::span<const typename B::Value> u,
                            const Activation& act) {
  switch (act.kind) {
    case ActivationKind::kLinear:
      return {u.begin(), u.end()};
    case ActivationKind::kPiecewise:
      return fxg::Piecewise(b, u);
    case ActivationKind::kTaylor:
      return fxg::TaylorLogistic(b, u, act.degree);
    case ActivationKind::kExact:
      if constexpr (requires { b.ExactLogistic(u); }) {
        return b.ExactLogistic(u);
      } else {
        throw ConfigError(
            "the exact logistic activation exists only in plaintext-double "
            "mode");
      }
  }
  throw ConfigError("unknown activation");
}

// w - (lr / |B|) * X_B^T (act(X_B w) - y_B), with rows the batch's examples.
template <class B>
fxg::Vec<B> SgdStep(B& b, const fxg::Vec<B>& w,
                    const std::vector<fxg::Vec<B>>& rows,
                    const fxg::Vec<B>& y, double learning_rate,
                    const Activation& act) {
  using V = typename B::Value;
  const std::size_t m = rows.size();
  const std::size_t d = w.size();
  MPML_ENFORCE(m > 0 && y.size() == m, ConfigError,
               "SGD step: empty or mismatched batch");
  std::vector<fxg::Vec<B>> ws(m, w);
  auto pred = fxg::InnerMany(b, rows, ws);
  pred = ApplyActivation(b, std::span<const V>(pred), act);
  fxg::Vec<B> res(m);
  for (std::size_t i = 0; i < m; ++i) res[i] = b.Sub(pred[i], y[i]);

  std::vector<fxg::Vec<B>> cols(d), ress(d, res);
  for (std::size_t j = 0; j < d; ++j) {
    cols[j].reserve(m);
    for (std::size_t i = 0; i < m; ++i) cols[j].push_back(rows[i][j]);
  }
  auto grad = fxg::InnerMany(b, cols, ress);
  const double scale = learning_rate / static_cast<double>(m);
  for (auto& g : grad) g = b.MulConstRaw(g, scale);
  auto upd = b.Truncate(grad);
  fxg::Vec<B> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = b.Sub(w[j], upd[j]);
  return out;
}

// Called after each step with the step index (1-based) and the weights.
template <class B>
using SgdObserver = std::function<void(std::size_t step, const fxg::Vec<B>&)>;

template <class B>
fxg::Vec<B> SgdTrain(B& b, const std::vector<fxg::Vec<B>>& X,
                     const fxg::Vec<B>& y, const SgdConfig& cfg,
                     const SgdObserver<B>& observer = {}) {
  MPML_ENFORCE(!X.empty() && X.size() == y.size(), ConfigError,
               "SGD: empty or mismatched training data");
  cfg.Validate(X.size());
  const std::size_t d = X[0].size();
  fxg::Vec<B> w(d, b.Zero());
  auto schedule = BatchSchedule(X.size(), cfg);
  std::size_t step = 0;
  for (const auto& batch : schedule) {
    std::vector<fxg::Vec<B>> rows;
    fxg::Vec<B> yb;
    rows.reserve(batch.size());
    for (std::size_t idx : batch) {
      rows.push_back(X[idx]);
      yb.push_back(y[idx]);
    }
    w = SgdStep(b, w, rows, yb, cfg.learning_rate, cfg.activation);
    if (observer) observer(++step, w);
  }
  return w;
}

enum class Task { kRegression, kClassification };

struct Metrics {
  double rmse = 0.0;
  double accuracy = 0.0;  // fraction in [0, 1]
};

// Regression: RMSE of the predictions. Classification: fraction of
// predicted probabilities on the correct side of 0.5 (ties count as 1).
Metrics EvaluatePredictions(std::span<const double> pred,
                            std::span<const double> y, Task task);

// Predictions X w (logistic of X w for classification), then as above.
Metrics Evaluate(std::span<const double> w, const std::vector<double>& X,
                 std::size_t d, std::span<const double> y, Task task);

}  // namespace mpml
