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

// Linear-system solvers over any fixed-point backend (see fx_generic.h).
// No pivoting: every branch is data independent.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mpml/errors.h"
#include "mpml/fixed_point.h"
#include "mpml/fx_generic.h"

namespace mpml {

template <class V>
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<V> data;  // row-major

  Mat() = default;
  Mat(std::size_t r, std::size_t c, const V& fill = V())
      : rows(r), cols(c), data(r * c, fill) {}

  V& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const V& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  std::vector<V> Row(std::size_t i, std::size_t begin, std::size_t end) const {
    return {data.begin() + i * cols + begin, data.begin() + i * cols + end};
  }
  std::vector<V> Col(std::size_t j, std::size_t begin, std::size_t end) const {
    std::vector<V> out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) out.push_back((*this)(i, j));
    return out;
  }
};

enum class SolverMethod { kLdlt, kCholesky, kCgd };

SolverMethod ParseSolverMethod(const std::string& name);
const char* SolverMethodName(SolverMethod m);

struct SolverConfig {
  SolverMethod method = SolverMethod::kCholesky;
  int cgd_iterations = 20;
};

// Public magnitude bounds of a system, used to reject precisions whose
// integer part cannot hold the intermediate values.
struct SystemBounds {
  std::size_t d = 0;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  double rhs_norm = 1.0;
};

// Throws ConfigError when some intermediate can exceed the representable
// range for the given method.
void CheckSolverRange(const FixedPointParams& params, const SolverConfig& cfg,
                      const SystemBounds& bounds);

template <class B>
using SMat = Mat<typename B::Value>;

// ---------------------------------------------------------------- LDLT

template <class B>
struct LdltFactors {
  SMat<B> L;           // unit lower triangular (diagonal left unset)
  fxg::Vec<B> D;
  fxg::Vec<B> inv_D;
};

// Left-looking: column j needs one batch of dot products against the
// already computed columns and one reciprocal of the pivot.
template <class B>
LdltFactors<B> LdltDecompose(B& b, const SMat<B>& A) {
  using V = typename B::Value;
  MPML_ENFORCE(A.rows == A.cols, ConfigError, "LDLT needs a square matrix");
  const std::size_t d = A.rows;
  LdltFactors<B> out;
  out.L = SMat<B>(d, d, b.Zero());
  SMat<B> W(d, d, b.Zero());  // W(i, k) = L(i, k) * D(k)
  for (std::size_t j = 0; j < d; ++j) {
    fxg::Vec<B> t(d - j);
    if (j == 0) {
      for (std::size_t i = 0; i < d; ++i) t[i] = A(i, 0);
    } else {
      std::vector<fxg::Vec<B>> xs, ys;
      const auto wj = W.Row(j, 0, j);
      for (std::size_t i = j; i < d; ++i) {
        xs.push_back(out.L.Row(i, 0, j));
        ys.push_back(wj);
      }
      auto s = fxg::InnerMany(b, xs, ys);
      for (std::size_t i = j; i < d; ++i) t[i - j] = b.Sub(A(i, j), s[i - j]);
    }
    out.D.push_back(t[0]);
    auto inv = b.Reciprocal(std::span<const V>(&t[0], 1))[0];
    out.inv_D.push_back(inv);
    if (j + 1 < d) {
      fxg::Vec<B> num(t.begin() + 1, t.end());
      fxg::Vec<B> rep(num.size(), inv);
      auto l = fxg::Mul(b, std::span<const V>(num), std::span<const V>(rep));
      for (std::size_t i = j + 1; i < d; ++i) {
        W(i, j) = num[i - j - 1];
        out.L(i, j) = l[i - j - 1];
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) out.L(i, i) = b.ConstInt(1);
  return out;
}

// ------------------------------------------------------------ Cholesky

template <class B>
struct CholeskyFactors {
  SMat<B> L;
  fxg::Vec<B> inv_diag;  // 1 / L(j, j)
};

template <class B>
CholeskyFactors<B> CholeskyDecompose(B& b, const SMat<B>& A) {
  using V = typename B::Value;
  MPML_ENFORCE(A.rows == A.cols, ConfigError,
               "Cholesky needs a square matrix");
  const std::size_t d = A.rows;
  CholeskyFactors<B> out;
  out.L = SMat<B>(d, d, b.Zero());
  for (std::size_t j = 0; j < d; ++j) {
    fxg::Vec<B> t(d - j);
    if (j == 0) {
      for (std::size_t i = 0; i < d; ++i) t[i] = A(i, 0);
    } else {
      std::vector<fxg::Vec<B>> xs, ys;
      const auto lj = out.L.Row(j, 0, j);
      for (std::size_t i = j; i < d; ++i) {
        xs.push_back(out.L.Row(i, 0, j));
        ys.push_back(lj);
      }
      auto s = fxg::InnerMany(b, xs, ys);
      for (std::size_t i = j; i < d; ++i) t[i - j] = b.Sub(A(i, j), s[i - j]);
    }
    auto root = b.SqrtInvSqrt(std::span<const V>(&t[0], 1));
    out.L(j, j) = root.sqrt[0];
    out.inv_diag.push_back(root.inv_sqrt[0]);
    if (j + 1 < d) {
      fxg::Vec<B> num(t.begin() + 1, t.end());
      fxg::Vec<B> rep(num.size(), root.inv_sqrt[0]);
      auto l = fxg::Mul(b, std::span<const V>(num), std::span<const V>(rep));
      for (std::size_t i = j + 1; i < d; ++i) out.L(i, j) = l[i - j - 1];
    }
  }
  return out;
}

// ------------------------------------------------------- substitution

// Solves L y = rhs (transpose = false) or L^T y = rhs (transpose = true)
// for lower triangular L. The diagonal is taken as one when inv_diag is
// null, otherwise row i is scaled by inv_diag[i].
template <class B>
fxg::Vec<B> TriSolve(B& b, const SMat<B>& L, const fxg::Vec<B>& rhs,
                     const fxg::Vec<B>* inv_diag, bool transpose) {
  using V = typename B::Value;
  const std::size_t d = L.rows;
  MPML_ENFORCE(L.cols == d && rhs.size() == d, ConfigError,
               "triangular solve: dimension mismatch");
  fxg::Vec<B> y(d, b.Zero());
  for (std::size_t step = 0; step < d; ++step) {
    const std::size_t i = transpose ? d - 1 - step : step;
    V acc = rhs[i];
    if (step > 0) {
      fxg::Vec<B> coeffs, known;
      if (transpose) {
        coeffs = L.Col(i, i + 1, d);
        known.assign(y.begin() + i + 1, y.end());
      } else {
        coeffs = L.Row(i, 0, i);
        known.assign(y.begin(), y.begin() + i);
      }
      acc = b.Sub(acc, fxg::Inner(b, coeffs, known));
    }
    y[i] = inv_diag ? fxg::Mul1(b, acc, (*inv_diag)[i]) : acc;
  }
  return y;
}

// Non-unit diagonal without precomputed inverses.
template <class B>
fxg::Vec<B> TriSolveGeneral(B& b, const SMat<B>& L, const fxg::Vec<B>& rhs,
                            bool unit_diag, bool transpose) {
  if (unit_diag) return TriSolve(b, L, rhs, nullptr, transpose);
  fxg::Vec<B> diag;
  for (std::size_t i = 0; i < L.rows; ++i) diag.push_back(L(i, i));
  auto inv = b.Reciprocal(diag);
  return TriSolve(b, L, rhs, &inv, transpose);
}

template <class B>
fxg::Vec<B> LdltSolve(B& b, const LdltFactors<B>& fac,
                      const fxg::Vec<B>& rhs) {
  using V = typename B::Value;
  auto y = TriSolve(b, fac.L, rhs, nullptr, false);
  auto z = fxg::Mul(b, std::span<const V>(y), std::span<const V>(fac.inv_D));
  return TriSolve(b, fac.L, z, nullptr, true);
}

template <class B>
fxg::Vec<B> CholeskySolve(B& b, const CholeskyFactors<B>& fac,
                          const fxg::Vec<B>& rhs) {
  auto y = TriSolve(b, fac.L, rhs, &fac.inv_diag, false);
  return TriSolve(b, fac.L, y, &fac.inv_diag, true);
}

// ------------------------------------------------------------------ CGD

// Called after each iteration with the current solution estimate.
template <class B>
using CgdObserver = std::function<void(int iteration, const fxg::Vec<B>& x)>;

// Conjugate gradients with the search direction rescaled to unit length in
// every iteration. The next direction uses the A-conjugacy form of the
// update coefficient so that it shares the step's reciprocal.
template <class B>
fxg::Vec<B> CgdSolve(B& b, const SMat<B>& A, const fxg::Vec<B>& rhs,
                     int iterations, const CgdObserver<B>& observer = {}) {
  using V = typename B::Value;
  using Vec = fxg::Vec<B>;
  MPML_ENFORCE(iterations >= 1, ConfigError,
               "CGD needs at least one iteration");
  const std::size_t d = A.rows;
  MPML_ENFORCE(A.cols == d && rhs.size() == d, ConfigError,
               "CGD: dimension mismatch");
  std::vector<Vec> rows;
  rows.reserve(d);
  for (std::size_t i = 0; i < d; ++i) rows.push_back(A.Row(i, 0, d));

  Vec x(d, b.Zero());
  Vec r = rhs;
  Vec p = rhs;
  for (int it = 1; it <= iterations; ++it) {
    auto nn = fxg::Inner(b, p, p);
    auto scale = b.InvSqrt(std::span<const V>(&nn, 1))[0];
    Vec rep(d, scale);
    Vec ph = fxg::Mul(b, std::span<const V>(p), std::span<const V>(rep));

    std::vector<Vec> phs(d, ph);
    Vec q = fxg::InnerMany(b, rows, phs);

    auto nd = fxg::InnerMany(b, std::vector<Vec>{r, ph},
                             std::vector<Vec>{ph, q});
    auto inv = b.Reciprocal(std::span<const V>(&nd[1], 1))[0];
    auto alpha = fxg::Mul1(b, nd[0], inv);

    Vec lhs(2 * d, alpha), vecs;
    vecs.reserve(2 * d);
    vecs.insert(vecs.end(), ph.begin(), ph.end());
    vecs.insert(vecs.end(), q.begin(), q.end());
    auto step = fxg::Mul(b, std::span<const V>(lhs), std::span<const V>(vecs));
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = b.Add(x[i], step[i]);
      r[i] = b.Sub(r[i], step[d + i]);
    }
    if (observer) observer(it, x);
    if (it == iterations) break;

    auto g = fxg::Inner(b, r, q);
    auto beta = b.Neg(fxg::Mul1(b, g, inv));
    Vec brep(d, beta);
    auto bp = fxg::Mul(b, std::span<const V>(brep), std::span<const V>(ph));
    for (std::size_t i = 0; i < d; ++i) p[i] = b.Add(r[i], bp[i]);
  }
  return x;
}

template <class B>
fxg::Vec<B> Solve(B& b, const SMat<B>& A, const fxg::Vec<B>& rhs,
                  const SolverConfig& cfg,
                  const CgdObserver<B>& observer = {}) {
  switch (cfg.method) {
    case SolverMethod::kLdlt:
      return LdltSolve(b, LdltDecompose(b, A), rhs);
    case SolverMethod::kCholesky:
      return CholeskySolve(b, CholeskyDecompose(b, A), rhs);
    case SolverMethod::kCgd:
      return CgdSolve(b, A, rhs, cfg.cgd_iterations, observer);
  }
  throw ConfigError("unknown solver method");
}

// Ridge normal equations from shared rows, left unnormalized:
// (X^T X + n lambda I) w = X^T y has the same solution as the averaged form
// and needs no division by n.
template <class B>
std::pair<SMat<B>, fxg::Vec<B>> NormalEquations(
    B& b, const std::vector<fxg::Vec<B>>& rows, const fxg::Vec<B>& y,
    double lambda) {
  using V = typename B::Value;
  const std::size_t n = rows.size();
  MPML_ENFORCE(n > 0 && y.size() == n, ConfigError,
               "normal equations: empty or mismatched data");
  const std::size_t d = rows[0].size();
  std::vector<fxg::Vec<B>> cols(d + 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) cols[j].push_back(rows[i][j]);
  }
  cols[d] = y;
  std::vector<fxg::Vec<B>> xs, ys;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j <= d; ++j) {
      xs.push_back(cols[i]);
      ys.push_back(cols[j]);
    }
  }
  auto sums = fxg::InnerMany(b, xs, ys);
  SMat<B> A(d, d, b.Zero());
  fxg::Vec<B> rhs(d, b.Zero());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j <= d; ++j) {
      const V& v = sums[pos++];
      if (j == d) {
        rhs[i] = v;
      } else {
        A(i, j) = v;
        A(j, i) = v;
      }
    }
    A(i, i) = b.AddConst(A(i, i), lambda * static_cast<double>(n));
  }
  return {std::move(A), std::move(rhs)};
}

}  // namespace mpml
