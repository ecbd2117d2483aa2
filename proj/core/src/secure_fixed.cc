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

#include "mpml/secure_fixed.h"

#include "mpml/errors.h"

namespace mpml {
namespace sfx {
namespace {

AuthShare ZeroShare(const PrimeField& fd) { return {fd.Zero(), fd.Zero()}; }

// Bits of a random mask: k low bits kept individually plus s high bits
// folded into one share.
struct BitMask {
  std::vector<AuthShare> low;  // k bits
  AuthShare value;             // sum_i 2^i low_i + 2^k * sum_j 2^j high_j
};

BitMask TakeBitMask(Engine& e, const std::vector<FieldElement>& pow2) {
  const auto& p = e.params();
  BitMask m;
  m.low.reserve(p.k);
  m.value = ZeroShare(e.field());
  for (int i = 0; i < p.k; ++i) {
    m.low.push_back(e.material().TakeBit());
    m.value += m.low.back() * pow2[i];
  }
  for (int j = 0; j < p.s; ++j) {
    m.value += e.material().TakeBit() * pow2[p.k + j];
  }
  return m;
}

std::vector<FieldElement> Pow2Table(const PrimeField& fd, int n) {
  std::vector<FieldElement> t;
  t.reserve(n);
  FieldElement v = fd.One();
  FieldElement two = fd.FromU64(2);
  for (int i = 0; i < n; ++i) {
    t.push_back(v);
    v *= two;
  }
  return t;
}

// Opens a + 2^k + mask for every input; returns the low k bits of each
// opened value.
std::vector<Limbs> OpenMasked(Engine& e, std::span<const AuthShare> a,
                              const std::vector<BitMask>& masks,
                              const FieldElement& offset) {
  std::vector<AuthShare> masked;
  masked.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    masked.push_back(e.AddPublic(a[j] + masks[j].value, offset));
  }
  auto opened = e.Open(masked);
  std::vector<Limbs> low;
  low.reserve(a.size());
  for (const auto& c : opened) {
    low.push_back(limbs::LowBits(c.ToCanonical(), e.params().k));
  }
  return low;
}

// x XOR c for a shared bit x and public bit c.
AuthShare XorPublic(Engine& e, const AuthShare& x, bool c) {
  return c ? e.AddPublic(-x, e.field().One()) : x;
}

}  // namespace

std::vector<AuthShare> Truncate(Engine& e, std::span<const AuthShare> a) {
  if (a.empty()) return {};
  const auto& p = e.params();
  const PrimeField& fd = e.field();
  const FieldElement offset = fd.Pow2(static_cast<std::size_t>(p.k + p.f));
  const FieldElement two_k = fd.Pow2(static_cast<std::size_t>(p.k));
  std::vector<TruncPair> pairs;
  pairs.reserve(a.size());
  std::vector<AuthShare> masked;
  masked.reserve(a.size());
  for (const auto& v : a) {
    pairs.push_back(e.material().TakeTruncPair());
    masked.push_back(e.AddPublic(v + pairs.back().r_full, offset));
  }
  auto opened = e.Open(masked);
  std::vector<AuthShare> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    FieldElement top =
        fd.FromCanonical(limbs::ShiftRight(opened[i].ToCanonical(), p.f));
    out.push_back(e.AddPublic(-pairs[i].r_top, top - two_k));
  }
  return out;
}

std::vector<AuthShare> LtzBits(Engine& e, std::span<const AuthShare> a) {
  const std::size_t m = a.size();
  if (m == 0) return {};
  const auto& p = e.params();
  const int k = p.k;
  const PrimeField& fd = e.field();
  const auto pow2 = Pow2Table(fd, k + p.s + 1);
  const FieldElement one = fd.One();

  std::vector<BitMask> masks;
  masks.reserve(m);
  for (std::size_t j = 0; j < m; ++j) masks.push_back(TakeBitMask(e, pow2));
  auto c = OpenMasked(e, a, masks, pow2[k]);

  // Prefix OR of (c XOR r) from the top bit down.
  std::vector<std::vector<AuthShare>> pre(m, std::vector<AuthShare>(k));
  for (std::size_t j = 0; j < m; ++j) {
    pre[j][k - 1] = XorPublic(e, masks[j].low[k - 1], limbs::Bit(c[j], k - 1));
  }
  std::vector<AuthShare> lhs(m), rhs(m);
  for (int i = k - 2; i >= 0; --i) {
    for (std::size_t j = 0; j < m; ++j) {
      lhs[j] = pre[j][i + 1];
      rhs[j] = XorPublic(e, masks[j].low[i], limbs::Bit(c[j], i));
    }
    auto prod = e.Mul(lhs, rhs);
    for (std::size_t j = 0; j < m; ++j) {
      pre[j][i] = lhs[j] + rhs[j] - prod[j];
    }
  }

  const FieldElement inv_two_k = pow2[k].Inverse();
  std::vector<AuthShare> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    // [c' < r']: the first differing bit from the top is set in r'.
    AuthShare lt = ZeroShare(fd);
    for (int i = 0; i < k; ++i) {
      if (limbs::Bit(c[j], i)) continue;
      lt += pre[j][i];
      if (i + 1 < k) lt -= pre[j][i + 1];
    }
    AuthShare r_low = ZeroShare(fd);
    for (int i = 0; i < k; ++i) r_low += masks[j].low[i] * pow2[i];
    // a mod 2^k = c' - r' + 2^k [c' < r']
    AuthShare a_mod =
        e.AddPublic(lt * pow2[k] - r_low, fd.FromCanonical(c[j]));
    // bit k of a + 2^k is the non-negativity flag.
    AuthShare nonneg = e.AddPublic(a[j] - a_mod, pow2[k]) * inv_two_k;
    out.push_back(e.AddPublic(-nonneg, one));
  }
  return out;
}

std::vector<std::vector<AuthShare>> MsbOneHot(Engine& e,
                                              std::span<const AuthShare> a) {
  const std::size_t m = a.size();
  if (m == 0) return {};
  const auto& p = e.params();
  const int k = p.k;
  const PrimeField& fd = e.field();
  const auto pow2 = Pow2Table(fd, k + p.s + 1);
  const FieldElement zero = fd.Zero();

  std::vector<BitMask> masks;
  masks.reserve(m);
  for (std::size_t j = 0; j < m; ++j) masks.push_back(TakeBitMask(e, pow2));
  auto c = OpenMasked(e, a, masks, zero);

  // Bits of a = (c' - r') mod 2^k by a borrow chain.
  std::vector<std::vector<AuthShare>> bits(m, std::vector<AuthShare>(k));
  std::vector<AuthShare> borrow(m);
  for (std::size_t j = 0; j < m; ++j) {
    bool c0 = limbs::Bit(c[j], 0);
    bits[j][0] = XorPublic(e, masks[j].low[0], c0);
    borrow[j] = c0 ? ZeroShare(fd) : masks[j].low[0];
  }
  std::vector<AuthShare> lhs(m), rhs(m);
  for (int i = 1; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      lhs[j] = masks[j].low[i];
      rhs[j] = borrow[j];
    }
    auto t = e.Mul(lhs, rhs);
    for (std::size_t j = 0; j < m; ++j) {
      bool ci = limbs::Bit(c[j], i);
      AuthShare sum = lhs[j] + rhs[j];
      AuthShare x = sum - t[j] - t[j];
      bits[j][i] = XorPublic(e, x, ci);
      borrow[j] = ci ? t[j] : sum - t[j];
    }
  }

  // Prefix OR from the top; its differences are the one-hot MSB.
  std::vector<std::vector<AuthShare>> pre(m, std::vector<AuthShare>(k));
  for (std::size_t j = 0; j < m; ++j) pre[j][k - 1] = bits[j][k - 1];
  for (int i = k - 2; i >= 0; --i) {
    for (std::size_t j = 0; j < m; ++j) {
      lhs[j] = pre[j][i + 1];
      rhs[j] = bits[j][i];
    }
    auto prod = e.Mul(lhs, rhs);
    for (std::size_t j = 0; j < m; ++j) {
      pre[j][i] = lhs[j] + rhs[j] - prod[j];
    }
  }
  std::vector<std::vector<AuthShare>> out(m, std::vector<AuthShare>(k));
  for (std::size_t j = 0; j < m; ++j) {
    for (int i = 0; i < k; ++i) {
      out[j][i] = i + 1 < k ? pre[j][i] - pre[j][i + 1] : pre[j][i];
    }
  }
  return out;
}

}  // namespace sfx

SecureBackend::SecureBackend(Engine& engine, NonlinearOptions nl)
    : engine_(engine), nl_(nl) {
  params().ValidateFor(engine_.field());
}

FieldElement SecureBackend::Raw(double c) const {
  return engine_.field().FromSigned(FxRaw(c, params()));
}

AuthShare SecureBackend::Zero() const {
  return {engine_.field().Zero(), engine_.field().Zero()};
}

AuthShare SecureBackend::Const(double c) const {
  return engine_.Constant(Raw(c));
}

AuthShare SecureBackend::ConstInt(int64_t c) const {
  return engine_.Constant(engine_.field().FromSigned(c));
}

AuthShare SecureBackend::AddConst(const AuthShare& a, double c) const {
  return engine_.AddPublic(a, Raw(c));
}

AuthShare SecureBackend::AddConstInt(const AuthShare& a, int64_t c) const {
  return engine_.AddPublic(a, engine_.field().FromSigned(c));
}

AuthShare SecureBackend::ScaleInt(const AuthShare& a, int64_t c) const {
  return a * engine_.field().FromSigned(c);
}

AuthShare SecureBackend::MulConstRaw(const AuthShare& a, double c) const {
  return a * Raw(c);
}

AuthShare SecureBackend::BitTimesConst(const AuthShare& bit, double c) const {
  return bit * Raw(c);
}

AuthShare SecureBackend::LinComb(std::span<const AuthShare> bits,
                                 std::span<const BigInt> coeffs) const {
  MPML_ENFORCE(bits.size() == coeffs.size(), ConfigError,
               "LinComb size mismatch");
  AuthShare acc = Zero();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (coeffs[i] == 0) continue;
    acc += bits[i] * engine_.field().FromSigned(coeffs[i]);
  }
  return acc;
}

std::vector<AuthShare> SecureBackend::MulRaw(std::span<const AuthShare> x,
                                             std::span<const AuthShare> y) {
  return engine_.Mul(x, y);
}

std::vector<AuthShare> SecureBackend::Truncate(std::span<const AuthShare> v) {
  return sfx::Truncate(engine_, v);
}

std::vector<AuthShare> SecureBackend::Ltz(std::span<const AuthShare> v) {
  return sfx::LtzBits(engine_, v);
}

std::vector<std::vector<AuthShare>> SecureBackend::MsbOneHot(
    std::span<const AuthShare> v) {
  return sfx::MsbOneHot(engine_, v);
}

std::vector<AuthShare> SecureBackend::Reciprocal(std::span<const AuthShare> v) {
  return fxg::NewtonReciprocal(*this, v, nl_.Reciprocal(params().f));
}

std::vector<AuthShare> SecureBackend::InvSqrt(std::span<const AuthShare> v) {
  return fxg::NewtonSqrtInvSqrt(*this, v, nl_.Sqrt(params().f), false, true)
      .inv_sqrt;
}

fxg::SqrtResult<SecureBackend> SecureBackend::SqrtInvSqrt(
    std::span<const AuthShare> v) {
  return fxg::NewtonSqrtInvSqrt(*this, v, nl_.Sqrt(params().f), true, true);
}

std::vector<AuthShare> SecureBackend::Input(int owner,
                                            std::span<const double> values,
                                            std::size_t count) {
  OwnedInput in;
  in.owner = owner;
  in.count = count;
  if (owner == party_id()) in.values.assign(values.begin(), values.end());
  return std::move(InputMany({in})[0]);
}

std::vector<std::vector<AuthShare>> SecureBackend::InputMany(
    const std::vector<OwnedInput>& inputs) {
  std::vector<InputRequest> reqs;
  reqs.reserve(inputs.size());
  for (const auto& in : inputs) {
    InputRequest r;
    r.owner = in.owner;
    r.count = in.count;
    if (in.owner == party_id()) {
      MPML_ENFORCE(in.values.size() == in.count, ConfigError,
                   "input owner supplied wrong number of values");
      r.values.reserve(in.count);
      for (double v : in.values) {
        r.values.push_back(FxEncode(v, params(), engine_.field()));
      }
    }
    reqs.push_back(std::move(r));
  }
  return engine_.InputBatch(reqs);
}

std::vector<double> SecureBackend::Open(std::span<const AuthShare> v) {
  auto opened = engine_.Open(v);
  std::vector<double> out;
  out.reserve(opened.size());
  for (const auto& e : opened) out.push_back(FxDecode(e, params()));
  return out;
}

}  // namespace mpml
