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

// Fixed-point algorithms written once against an arithmetic backend.
//
// A backend B exposes a value type B::Value that stands for a real number.
// Values carry an implicit scale that the algorithm tracks:
//   fixed   - raw = round(x * 2^f), the normal case
//   wide    - raw = x * 2^(2f), the untruncated result of MulRaw/MulConstRaw
//   integer - raw = x, used for secret bits and exponents
// The plaintext double backend ignores scales; the fixed-point backends
// (secure and simulated) honour them exactly.
//
// Required members:
//   params(), Const, ConstInt, Zero, Add, Sub, Neg, AddConst, AddConstInt,
//   ScaleInt, MulConstRaw, BitTimesConst,
//   MulRaw, Truncate, Ltz, Reciprocal, InvSqrt, SqrtInvSqrt, Input, Open.
// Fixed-point backends also provide MsbOneHot and LinComb, from which the
// Newton-based functions below are assembled.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mpml/errors.h"
#include "mpml/field.h"
#include "mpml/fixed_point.h"

namespace mpml::fxg {

// ceil(log2(f)) + 2.
inline int DefaultNewtonIterations(int f) {
  int c = 0;
  while ((1 << c) < f) ++c;
  return c + 2;
}

// Initial estimates on [0.5, 1).
inline constexpr double kRecipInit0 = 2.9142;
inline constexpr int64_t kRecipInitSlope = 2;
inline constexpr double kInvSqrtInit0 = 1.787727;
inline constexpr double kInvSqrtInitSlope = 0.809987;

template <class B>
using Vec = std::vector<typename B::Value>;

template <class B>
Vec<B> Mul(B& b, std::span<const typename B::Value> x,
           std::span<const typename B::Value> y) {
  auto w = b.MulRaw(x, y);
  return b.Truncate(w);
}

template <class B>
typename B::Value Mul1(B& b, const typename B::Value& x,
                       const typename B::Value& y) {
  return Mul(b, std::span(&x, 1), std::span(&y, 1))[0];
}

// Dot products with one truncation each. xs[i], ys[i] are the i-th pair.
template <class B>
Vec<B> InnerMany(B& b, const std::vector<Vec<B>>& xs,
                 const std::vector<Vec<B>>& ys) {
  MPML_ENFORCE(xs.size() == ys.size(), ConfigError, "inner: count mismatch");
  Vec<B> fx, fy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    MPML_ENFORCE(xs[i].size() == ys[i].size(), ConfigError,
                 "inner: length mismatch");
    fx.insert(fx.end(), xs[i].begin(), xs[i].end());
    fy.insert(fy.end(), ys[i].begin(), ys[i].end());
  }
  auto prods = b.MulRaw(fx, fy);
  Vec<B> sums;
  std::size_t pos = 0;
  for (const auto& x : xs) {
    auto acc = b.Zero();
    for (std::size_t j = 0; j < x.size(); ++j) acc = b.Add(acc, prods[pos++]);
    sums.push_back(acc);
  }
  return b.Truncate(sums);
}

template <class B>
typename B::Value Inner(B& b, const Vec<B>& x, const Vec<B>& y) {
  return InnerMany(b, std::vector<Vec<B>>{x}, std::vector<Vec<B>>{y})[0];
}

// ----------------------------------------------------------- normalization

// For a fixed-point backend: the one-hot MSB bits of each positive input,
// and the linear combinations built from them.
template <class B>
struct NormBits {
  std::vector<Vec<B>> onehot;  // onehot[j][i] = 1 iff msb(raw x_j) == i
};

// raw coefficients sum_i h_i * coeff(i).
template <class B, class Fn>
Vec<B> CombineBits(B& b, const NormBits<B>& nb, Fn coeff) {
  const int k = b.params().k;
  std::vector<BigInt> c(k);
  for (int i = 0; i < k; ++i) c[i] = coeff(i);
  Vec<B> out;
  out.reserve(nb.onehot.size());
  for (const auto& h : nb.onehot) out.push_back(b.LinComb(h, c));
  return out;
}

inline BigInt Pow2Big(int e) {
  MPML_ENFORCE(e >= 0, RangeError, "negative power of two");
  return BigInt(1) << e;
}

// Exponent e_i such that x = x_norm * 2^e when msb(raw x) == i.
inline int MsbExponent(int i, int f) { return i - f + 1; }

inline int FloorHalf(int e) { return e >= 0 ? e / 2 : -((-e + 1) / 2); }
inline int CeilHalf(int e) { return -FloorHalf(-e); }

template <class B>
struct Normalized {
  Vec<B> x_norm;    // fixed, in [0.5, 1)
  Vec<B> exponent;  // integer
};

// x = x_norm * 2^e for x > 0.
template <class B>
Normalized<B> Normalize(B& b, std::span<const typename B::Value> x) {
  const int f = b.params().f;
  MPML_ENFORCE(b.params().k <= 2 * f, ConfigError,
               "normalization requires k <= 2f");
  auto nb = NormBits<B>{b.MsbOneHot(x)};
  auto F = CombineBits(b, nb, [&](int i) { return Pow2Big(2 * f - 1 - i); });
  Normalized<B> out;
  out.x_norm = Mul(b, x, std::span<const typename B::Value>(F));
  for (const auto& h : nb.onehot) {
    std::vector<BigInt> c(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      c[i] = MsbExponent(static_cast<int>(i), f);
    }
    out.exponent.push_back(b.LinComb(h, c));
  }
  return out;
}

// 1/x for x > 0 by Newton iteration on the normalized input.
template <class B>
Vec<B> NewtonReciprocal(B& b, std::span<const typename B::Value> x,
                        int iterations) {
  using V = typename B::Value;
  MPML_ENFORCE(iterations >= 1, ConfigError, "need at least one iteration");
  const int f = b.params().f;
  MPML_ENFORCE(b.params().k <= 2 * f, ConfigError,
               "reciprocal requires k <= 2f");
  if (x.empty()) return {};
  auto nb = NormBits<B>{b.MsbOneHot(x)};
  auto F = CombineBits(b, nb, [&](int i) { return Pow2Big(2 * f - 1 - i); });
  auto xn = Mul(b, x, std::span<const V>(F));
  Vec<B> y;
  for (const auto& v : xn) {
    y.push_back(b.AddConst(b.ScaleInt(v, -kRecipInitSlope),
                           kRecipInit0));
  }
  for (int it = 0; it < iterations; ++it) {
    auto t = Mul(b, std::span<const V>(xn), std::span<const V>(y));
    Vec<B> e;
    for (const auto& v : t) e.push_back(b.AddConst(b.Neg(v), 2.0));
    y = Mul(b, std::span<const V>(y), std::span<const V>(e));
  }
  return Mul(b, std::span<const V>(y), std::span<const V>(F));
}

template <class B>
struct SqrtResult {
  Vec<B> sqrt;
  Vec<B> inv_sqrt;
};

// sqrt(x) and 1/sqrt(x) for 0 < x < 2^(k-f-1), sharing one normalization.
template <class B>
SqrtResult<B> NewtonSqrtInvSqrt(B& b, std::span<const typename B::Value> x,
                                int iterations, bool want_sqrt,
                                bool want_inv) {
  using V = typename B::Value;
  MPML_ENFORCE(iterations >= 1, ConfigError, "need at least one iteration");
  const int f = b.params().f;
  const int k = b.params().k;
  MPML_ENFORCE(k <= 2 * f, ConfigError, "sqrt requires k <= 2f");
  SqrtResult<B> out;
  if (x.empty()) return out;
  auto nb = NormBits<B>{b.MsbOneHot(x)};
  // x/2 normalized to [0.25, 0.5). The top bit is outside the domain.
  auto Fh = CombineBits(b, nb, [&](int i) {
    return i <= 2 * f - 2 ? Pow2Big(2 * f - 2 - i) : BigInt(0);
  });
  auto xh = Mul(b, x, std::span<const V>(Fh));
  Vec<B> xn;
  for (const auto& v : xh) xn.push_back(b.ScaleInt(v, 2));

  Vec<B> lin;
  for (const auto& v : xn) lin.push_back(b.MulConstRaw(v, -kInvSqrtInitSlope));
  auto y = b.Truncate(lin);
  for (auto& v : y) v = b.AddConst(v, kInvSqrtInit0);

  for (int it = 0; it < iterations; ++it) {
    auto u = Mul(b, std::span<const V>(y), std::span<const V>(y));
    auto t = Mul(b, std::span<const V>(xh), std::span<const V>(u));
    Vec<B> e;
    for (const auto& v : t) e.push_back(b.AddConst(b.Neg(v), 1.5));
    y = Mul(b, std::span<const V>(y), std::span<const V>(e));
  }

  // Odd exponents pick up a factor sqrt(2).
  auto odd = CombineBits(b, nb, [&](int i) {
    return BigInt((MsbExponent(i, f) % 2 != 0) ? 1 : 0);
  });
  Vec<B> corr;
  for (const auto& o : odd) {
    corr.push_back(b.AddConst(b.BitTimesConst(o, std::sqrt(2.0) - 1.0), 1.0));
  }
  auto g = Mul(b, std::span<const V>(y), std::span<const V>(corr));

  Vec<B> lhs, rhs;
  const std::size_t m = x.size();
  if (want_inv) {
    auto P = CombineBits(b, nb, [&](int i) {
      return Pow2Big(f - CeilHalf(MsbExponent(i, f)));
    });
    lhs.insert(lhs.end(), g.begin(), g.end());
    rhs.insert(rhs.end(), P.begin(), P.end());
  }
  if (want_sqrt) {
    lhs.insert(lhs.end(), xn.begin(), xn.end());
    rhs.insert(rhs.end(), g.begin(), g.end());
  }
  auto stage = Mul(b, std::span<const V>(lhs), std::span<const V>(rhs));
  std::size_t pos = 0;
  if (want_inv) {
    out.inv_sqrt.assign(stage.begin(), stage.begin() + m);
    pos = m;
  }
  if (want_sqrt) {
    Vec<B> s(stage.begin() + pos, stage.begin() + pos + m);
    auto P = CombineBits(b, nb, [&](int i) {
      return Pow2Big(f + FloorHalf(MsbExponent(i, f)));
    });
    out.sqrt = Mul(b, std::span<const V>(s), std::span<const V>(P));
  }
  return out;
}

// --------------------------------------------------------------- activations

// 0 for u < -1/2, u + 1/2 in between, 1 for u > 1/2.
template <class B>
Vec<B> Piecewise(B& b, std::span<const typename B::Value> u) {
  using V = typename B::Value;
  const std::size_t m = u.size();
  if (m == 0) return {};
  Vec<B> args;
  args.reserve(2 * m);
  Vec<B> shifted;
  for (const auto& v : u) {
    shifted.push_back(b.AddConst(v, 0.5));
    args.push_back(shifted.back());
  }
  for (const auto& v : u) args.push_back(b.AddConst(b.Neg(v), 0.5));
  auto bits = b.Ltz(args);
  Vec<B> middle;
  for (std::size_t i = 0; i < m; ++i) {
    // 1 - b_lo - b_hi: the two bits are never both set.
    middle.push_back(
        b.AddConstInt(b.Neg(b.Add(bits[i], bits[m + i])), 1));
  }
  auto lin = b.MulRaw(std::span<const V>(shifted), std::span<const V>(middle));
  Vec<B> out;
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(b.Add(lin[i], b.BitTimesConst(bits[m + i], 1.0)));
  }
  return out;
}

// Maclaurin coefficients of the logistic function, index = power.
inline std::vector<double> LogisticSeries(int degree) {
  MPML_ENFORCE(degree == 2 || degree == 5 || degree == 7 || degree == 10,
               ConfigError,
               "Taylor degree must be one of 2, 5, 7, 10, got " +
                   std::to_string(degree));
  static const double kAll[] = {0.5,
                                0.25,
                                0.0,
                                -1.0 / 48.0,
                                0.0,
                                1.0 / 480.0,
                                0.0,
                                -17.0 / 80640.0,
                                0.0,
                                31.0 / 1451520.0,
                                0.0};
  return std::vector<double>(kAll, kAll + degree + 1);
}

// Taylor polynomial of the given degree: odd powers are built by repeated
// multiplication by u^2, each term is scaled by its public coefficient and
// the sum is truncated once.
template <class B>
Vec<B> TaylorLogistic(B& b, std::span<const typename B::Value> u, int degree) {
  using V = typename B::Value;
  auto coeff = LogisticSeries(degree);
  const std::size_t m = u.size();
  if (m == 0) return {};
  std::vector<Vec<B>> powers(coeff.size());  // odd powers only
  powers[1].assign(u.begin(), u.end());
  if (degree >= 3) {
    Vec<B> u2 = Mul(b, u, u);
    int last = 1;
    for (int p = 3; p < static_cast<int>(coeff.size()); p += 2) {
      powers[p] = Mul(b, std::span<const V>(powers[last]),
                      std::span<const V>(u2));
      last = p;
    }
  }
  Vec<B> acc;
  for (std::size_t i = 0; i < m; ++i) {
    V s = b.MulConstRaw(powers[1][i], coeff[1]);
    for (std::size_t p = 3; p < coeff.size(); p += 2) {
      if (coeff[p] == 0.0) continue;
      s = b.Add(s, b.MulConstRaw(powers[p][i], coeff[p]));
    }
    acc.push_back(s);
  }
  auto out = b.Truncate(acc);
  for (auto& v : out) v = b.AddConst(v, coeff[0]);
  return out;
}

}  // namespace mpml::fxg
