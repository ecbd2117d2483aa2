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

#include "mpml/cost_model.h"

#include <sstream>

#include "mpml/errors.h"

namespace mpml {

Cost& Cost::operator+=(const Cost& o) {
  triples += o.triples;
  trunc_pairs += o.trunc_pairs;
  bits += o.bits;
  rounds += o.rounds;
  opened_elements += o.opened_elements;
  if (input_elements.size() < o.input_elements.size()) {
    input_elements.resize(o.input_elements.size(), 0);
  }
  for (std::size_t i = 0; i < o.input_elements.size(); ++i) {
    input_elements[i] += o.input_elements[i];
  }
  return *this;
}

Budget Cost::ToBudget(int n_parties) const {
  Budget b;
  b.triples = triples;
  b.trunc_pairs = trunc_pairs;
  b.bits = bits;
  b.masks.assign(n_parties, 0);
  for (std::size_t i = 0; i < input_elements.size(); ++i) {
    b.AddMasks(static_cast<int>(i), input_elements[i]);
  }
  return b;
}

std::string Cost::ToString() const {
  std::ostringstream os;
  os << "triples=" << triples << " trunc_pairs=" << trunc_pairs
     << " bits=" << bits << " rounds=" << rounds
     << " opened=" << opened_elements << " inputs=[";
  for (std::size_t i = 0; i < input_elements.size(); ++i) {
    os << (i ? "," : "") << input_elements[i];
  }
  os << "]";
  return os.str();
}

namespace cost {
namespace {

Cost MulCalls(uint64_t m, uint64_t calls) {
  Cost c;
  if (m == 0) return c;
  c.triples = m * calls;
  c.trunc_pairs = m * calls;
  c.rounds = 2 * calls;
  c.opened_elements = 3 * m * calls;
  return c;
}

}  // namespace

Cost Mul(uint64_t m) { return MulCalls(m, 1); }

Cost Inner(uint64_t count, uint64_t len) {
  Cost c;
  if (count == 0) return c;
  c.trunc_pairs = count;
  c.rounds = 1;
  c.opened_elements = count;
  if (len > 0) {
    c.triples = count * len;
    c.rounds += 1;
    c.opened_elements += 2 * count * len;
  }
  return c;
}

Cost Truncate(uint64_t m) {
  Cost c;
  if (m == 0) return c;
  c.trunc_pairs = m;
  c.rounds = 1;
  c.opened_elements = m;
  return c;
}

Cost Ltz(uint64_t m, const FixedPointParams& p) {
  Cost c;
  if (m == 0) return c;
  const uint64_t k = p.k;
  c.bits = m * (k + p.s);
  c.triples = m * (k - 1);
  c.rounds = k;
  c.opened_elements = m + 2 * m * (k - 1);
  return c;
}

Cost MsbOneHot(uint64_t m, const FixedPointParams& p) {
  Cost c;
  if (m == 0) return c;
  const uint64_t k = p.k;
  c.bits = m * (k + p.s);
  c.triples = 2 * m * (k - 1);
  c.rounds = 2 * k - 1;
  c.opened_elements = m + 4 * m * (k - 1);
  return c;
}

Cost Reciprocal(uint64_t m, const FixedPointParams& p, int iterations) {
  if (m == 0) return {};
  return MsbOneHot(m, p) + MulCalls(m, 2 + 2 * iterations);
}

Cost SqrtInvSqrt(uint64_t m, const FixedPointParams& p, int iterations,
                 bool want_sqrt, bool want_inv) {
  if (m == 0) return {};
  // normalize, 3 per iteration, exponent-parity correction
  Cost c = MsbOneHot(m, p) + Truncate(m) + MulCalls(m, 2 + 3 * iterations);
  const uint64_t staged = (want_inv ? 1 : 0) + (want_sqrt ? 1 : 0);
  if (staged > 0) {
    c += MulCalls(m * staged, 1);
  }
  if (want_sqrt) c += MulCalls(m, 1);
  return c;
}

Cost Piecewise(uint64_t m, const FixedPointParams& p) {
  if (m == 0) return {};
  Cost c = Ltz(2 * m, p);
  c.triples += m;
  c.rounds += 1;
  c.opened_elements += 2 * m;
  return c;
}

Cost Taylor(uint64_t m, int degree) {
  fxg::LogisticSeries(degree);  // validates
  if (m == 0) return {};
  // u^2, then u^3, u^5, ... up to the degree
  const uint64_t odd_powers = degree >= 3 ? (degree - 1) / 2 : 0;
  Cost c = Truncate(m);
  if (odd_powers > 0) c += MulCalls(m, odd_powers + 1);
  return c;
}

uint64_t BytesPerPeer(const Cost& c, int party, std::size_t session_id_len,
                      std::size_t element_bytes) {
  const uint64_t header = 15 + session_id_len;
  uint64_t bytes = c.rounds * header + c.opened_elements * element_bytes;
  if (party >= 0 && static_cast<std::size_t>(party) < c.input_elements.size()) {
    bytes += c.input_elements[party] * element_bytes;
  }
  return bytes;
}

uint64_t MacCheckBytesPerPeer(uint64_t checks, std::size_t session_id_len,
                              std::size_t element_bytes) {
  const uint64_t header = 15 + session_id_len;
  // commit(32) reveal(32+32) commit(32) reveal(32+element)
  return checks * (kMacCheckRounds * header + 160 + element_bytes);
}

}  // namespace cost

// ----------------------------------------------------------- CountingBackend

CountingBackend::CountingBackend(FixedPointParams params, int n_parties,
                                 NonlinearOptions nl)
    : params_(params), n_(n_parties), nl_(nl) {
  params_.Validate();
  cost_.input_elements.assign(n_parties, 0);
}

using CV = CountingBackend::Value;

std::vector<CV> CountingBackend::MulRaw(std::span<const CV> x,
                                        std::span<const CV> y) {
  MPML_ENFORCE(x.size() == y.size(), ConfigError, "Mul size mismatch");
  if (!x.empty()) {
    cost_.triples += x.size();
    cost_.rounds += 1;
    cost_.opened_elements += 2 * x.size();
  }
  return std::vector<CV>(x.size());
}

std::vector<CV> CountingBackend::Truncate(std::span<const CV> v) {
  cost_ += cost::Truncate(v.size());
  return std::vector<CV>(v.size());
}

std::vector<CV> CountingBackend::Ltz(std::span<const CV> v) {
  cost_ += cost::Ltz(v.size(), params_);
  return std::vector<CV>(v.size());
}

std::vector<std::vector<CV>> CountingBackend::MsbOneHot(
    std::span<const CV> v) {
  cost_ += cost::MsbOneHot(v.size(), params_);
  return std::vector<std::vector<CV>>(v.size(), std::vector<CV>(params_.k));
}

std::vector<CV> CountingBackend::Reciprocal(std::span<const CV> v) {
  return fxg::NewtonReciprocal(*this, v, nl_.Reciprocal(params_.f));
}

std::vector<CV> CountingBackend::InvSqrt(std::span<const CV> v) {
  return fxg::NewtonSqrtInvSqrt(*this, v, nl_.Sqrt(params_.f), false, true)
      .inv_sqrt;
}

fxg::SqrtResult<CountingBackend> CountingBackend::SqrtInvSqrt(
    std::span<const CV> v) {
  return fxg::NewtonSqrtInvSqrt(*this, v, nl_.Sqrt(params_.f), true, true);
}

std::vector<CV> CountingBackend::Input(int owner, std::span<const double>,
                                       std::size_t count) {
  OwnedInput in;
  in.owner = owner;
  in.count = count;
  return InputMany({in})[0];
}

std::vector<std::vector<CV>> CountingBackend::InputMany(
    const std::vector<OwnedInput>& inputs) {
  std::vector<std::vector<CV>> out;
  std::size_t total = 0;
  for (const auto& in : inputs) {
    MPML_ENFORCE(in.owner >= 0 && in.owner < n_, ConfigError,
                 "input owner out of range");
    cost_.input_elements[in.owner] += in.count;
    total += in.count;
    out.emplace_back(in.count);
  }
  if (total > 0) cost_.rounds += 1;
  return out;
}

std::vector<double> CountingBackend::Open(std::span<const CV> v) {
  if (!v.empty()) {
    cost_.rounds += 1;
    cost_.opened_elements += v.size();
  }
  return std::vector<double>(v.size(), 0.0);
}

}  // namespace mpml
