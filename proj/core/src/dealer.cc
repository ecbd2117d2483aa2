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

#include "mpml/dealer.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "mpml/errors.h"
#include "mpml/prg.h"

namespace mpml {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kChunk = 256;
constexpr uint64_t kUnlimited = std::numeric_limits<uint64_t>::max();
constexpr char kMagic[4] = {'M', 'P', 'M', 'L'};
constexpr uint16_t kVersion = 1;

std::size_t ElemsPerItem(MaterialKind kind) {
  switch (kind) {
    case MaterialKind::kTriple: return 3;
    case MaterialKind::kTruncPair: return 2;
    case MaterialKind::kBit: return 1;
    case MaterialKind::kMask: return 1;
  }
  return 0;
}

// Produces items [first, first + count) of one lane for one party.
using FillFn = std::function<void(uint64_t first, std::size_t count,
                                  std::vector<AuthShare>& shares,
                                  std::vector<FieldElement>& clears)>;

FieldElement MacKeyShare(const DealerConfig& c, int party) {
  return Prg::Derive(c.seed, "dealer/mac-key",
                     {static_cast<uint64_t>(c.n_parties),
                      static_cast<uint64_t>(party)})
      .NextField(*c.field);
}

// Inline generator. Party j < n-1 draws its shares from its own stream; the
// last party's shares are the secret minus everyone else's.
class Generator {
 public:
  Generator(const DealerConfig& c, int party, MaterialKind kind, int owner)
      : c_(c), party_(party), kind_(kind), owner_(owner) {
    if (party_ == c_.n_parties - 1) {
      alpha_ = c_.field->Zero();
      for (int j = 0; j < c_.n_parties; ++j) alpha_ += MacKeyShare(c_, j);
    }
  }

  void operator()(uint64_t first, std::size_t count,
                  std::vector<AuthShare>& shares,
                  std::vector<FieldElement>& clears) const {
    const std::size_t per = ElemsPerItem(kind_);
    shares.clear();
    clears.clear();
    shares.reserve(count * per);
    uint64_t chunk = first / kChunk;
    std::size_t skip = first % kChunk;
    while (shares.size() < count * per) {
      std::size_t items = std::min<std::size_t>(
          kChunk - skip, count - shares.size() / per);
      GenerateChunk(chunk, skip, items, shares, clears);
      ++chunk;
      skip = 0;
    }
  }

 private:
  Prg SharePrg(int j, uint64_t chunk) const {
    return Prg::Derive(c_.seed, "dealer/share",
                       {static_cast<uint64_t>(c_.n_parties),
                        static_cast<uint64_t>(j),
                        static_cast<uint64_t>(kind_),
                        static_cast<uint64_t>(owner_), chunk});
  }

  void DrawValues(Prg& prg, std::vector<FieldElement>& vals) const {
    const PrimeField& fd = *c_.field;
    vals.clear();
    switch (kind_) {
      case MaterialKind::kTriple: {
        FieldElement a = prg.NextField(fd);
        FieldElement b = prg.NextField(fd);
        vals = {a, b, a * b};
        break;
      }
      case MaterialKind::kTruncPair: {
        const auto& p = c_.params;
        Limbs r = prg.NextBits(static_cast<std::size_t>(p.k + p.f + p.s));
        vals = {fd.FromCanonical(r),
                fd.FromCanonical(limbs::ShiftRight(r, p.f))};
        break;
      }
      case MaterialKind::kBit:
        vals = {prg.NextBit() ? fd.One() : fd.Zero()};
        break;
      case MaterialKind::kMask:
        vals = {prg.NextField(fd)};
        break;
    }
  }

  void GenerateChunk(uint64_t chunk, std::size_t skip, std::size_t items,
                     std::vector<AuthShare>& shares,
                     std::vector<FieldElement>& clears) const {
    const int n = c_.n_parties;
    const bool last = party_ == n - 1;
    const bool owner = kind_ == MaterialKind::kMask && party_ == owner_;
    const bool need_values = last || owner;
    const std::size_t per = ElemsPerItem(kind_);
    const PrimeField& fd = *c_.field;

    Prg value_prg = Prg::Derive(c_.seed, "dealer/value",
                                {static_cast<uint64_t>(kind_),
                                 static_cast<uint64_t>(owner_), chunk});
    std::vector<Prg> prgs;
    if (last) {
      for (int j = 0; j < n - 1; ++j) prgs.push_back(SharePrg(j, chunk));
    } else {
      prgs.push_back(SharePrg(party_, chunk));
    }
    std::vector<FieldElement> vals;
    for (std::size_t i = 0; i < skip + items; ++i) {
      if (need_values) DrawValues(value_prg, vals);
      const bool emit = i >= skip;
      for (std::size_t e = 0; e < per; ++e) {
        AuthShare s;
        if (last) {
          s.value = vals[e];
          s.mac = alpha_ * vals[e];
          for (auto& prg : prgs) {
            s.value -= prg.NextField(fd);
            s.mac -= prg.NextField(fd);
          }
        } else {
          s.value = prgs[0].NextField(fd);
          s.mac = prgs[0].NextField(fd);
        }
        if (emit) shares.push_back(s);
      }
      if (emit && kind_ == MaterialKind::kMask) {
        clears.push_back(owner ? vals[0] : fd.Zero());
      }
    }
  }

  DealerConfig c_;
  int party_;
  MaterialKind kind_;
  int owner_;
  FieldElement alpha_;
};

void PutLe(std::ostream& os, uint64_t v, int width) {
  char b[8];
  for (int i = 0; i < width; ++i) b[i] = static_cast<char>(v >> (8 * i));
  os.write(b, width);
}

uint64_t GetLe(std::istream& is, int width, const std::string& what) {
  unsigned char b[8] = {};
  is.read(reinterpret_cast<char*>(b), width);
  MPML_ENFORCE(is.good(), ParseError, "truncated preprocessing file at " + what);
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

void PutElem(std::ostream& os, const FieldElement& e, std::vector<uint8_t>& tmp) {
  e.ToBytes(tmp);
  os.write(reinterpret_cast<const char*>(tmp.data()),
           static_cast<std::streamsize>(tmp.size()));
}

FieldElement GetElem(std::istream& is, const PrimeField& field,
                     std::vector<uint8_t>& tmp) {
  is.read(reinterpret_cast<char*>(tmp.data()),
          static_cast<std::streamsize>(tmp.size()));
  MPML_ENFORCE(is.good(), ParseError, "truncated preprocessing file body");
  return field.FromBytes(tmp);
}

}  // namespace

// ------------------------------------------------------------------ budget

uint64_t Budget::masks_total() const {
  uint64_t t = 0;
  for (auto m : masks) t += m;
  return t;
}

uint64_t Budget::mask_count(int owner) const {
  return owner >= 0 && static_cast<std::size_t>(owner) < masks.size()
             ? masks[owner]
             : 0;
}

void Budget::AddMasks(int owner, uint64_t count) {
  if (masks.size() <= static_cast<std::size_t>(owner)) masks.resize(owner + 1, 0);
  masks[owner] += count;
}

Budget& Budget::operator+=(const Budget& o) {
  triples += o.triples;
  trunc_pairs += o.trunc_pairs;
  bits += o.bits;
  for (std::size_t i = 0; i < o.masks.size(); ++i) {
    AddMasks(static_cast<int>(i), o.masks[i]);
  }
  return *this;
}

Budget operator*(Budget a, uint64_t times) {
  a.triples *= times;
  a.trunc_pairs *= times;
  a.bits *= times;
  for (auto& m : a.masks) m *= times;
  return a;
}

bool Budget::Covers(const Budget& used) const {
  if (used.triples > triples || used.trunc_pairs > trunc_pairs ||
      used.bits > bits) {
    return false;
  }
  for (std::size_t i = 0; i < used.masks.size(); ++i) {
    if (used.masks[i] > mask_count(static_cast<int>(i))) return false;
  }
  return true;
}

std::string Budget::ToString() const {
  std::ostringstream os;
  os << "triples=" << triples << " trunc_pairs=" << trunc_pairs
     << " bits=" << bits << " masks=[";
  for (std::size_t i = 0; i < masks.size(); ++i) {
    os << (i ? "," : "") << masks[i];
  }
  os << "]";
  return os.str();
}

bool operator==(const Budget& a, const Budget& b) {
  return a.Covers(b) && b.Covers(a);
}

const char* MaterialKindName(MaterialKind kind) {
  switch (kind) {
    case MaterialKind::kTriple: return "triple";
    case MaterialKind::kTruncPair: return "trunc-pair";
    case MaterialKind::kBit: return "bit";
    case MaterialKind::kMask: return "input-mask";
  }
  return "unknown";
}

// ------------------------------------------------------------------- lanes

class MaterialLane {
 public:
  std::string name;
  std::size_t per = 1;
  uint64_t limit = kUnlimited;
  uint64_t next = 0;
  uint64_t high_water = 0;
  FillFn fill;
  std::shared_ptr<std::istream> file;  // keeps file lanes alive

  uint64_t buf_first = 0;
  std::size_t buf_items = 0;
  std::vector<AuthShare> buf;
  std::vector<FieldElement> clears;
};

PartyMaterial::PartyMaterial(int party, int n, const PrimeField& field,
                             const FixedPointParams& params)
    : party_(party), n_(n), field_(&field), params_(params) {}

PartyMaterial::~PartyMaterial() = default;

MaterialLane& PartyMaterial::Lane(MaterialKind kind, int owner) {
  std::size_t idx = static_cast<std::size_t>(kind);
  if (kind == MaterialKind::kMask) {
    MPML_ENFORCE(owner >= 0 && owner < n_, ConfigError,
                 "mask owner out of range");
    idx += static_cast<std::size_t>(owner);
  }
  return *lanes_[idx];
}

void PartyMaterial::Take(MaterialLane& lane, std::size_t elems, AuthShare* out,
                         FieldElement* clear) {
  if (lane.next < lane.high_water) {
    throw ProtocolError("reuse of " + lane.name + " #" +
                        std::to_string(lane.next));
  }
  if (lane.next >= lane.limit) {
    throw PreprocessingExhausted(lane.name + " material exhausted after " +
                                 std::to_string(lane.limit) + " items");
  }
  if (lane.next >= lane.buf_first + lane.buf_items) {
    auto t0 = Clock::now();
    std::size_t count = static_cast<std::size_t>(
        std::min<uint64_t>(kChunk, lane.limit - lane.next));
    lane.fill(lane.next, count, lane.buf, lane.clears);
    lane.buf_first = lane.next;
    lane.buf_items = count;
    material_seconds_ +=
        std::chrono::duration<double>(Clock::now() - t0).count();
  }
  std::size_t off = static_cast<std::size_t>(lane.next - lane.buf_first);
  for (std::size_t e = 0; e < elems; ++e) out[e] = lane.buf[off * elems + e];
  if (clear) *clear = lane.clears[off];
  ++lane.next;
  lane.high_water = lane.next;
}

Triple PartyMaterial::TakeTriple() {
  AuthShare s[3];
  Take(Lane(MaterialKind::kTriple, 0), 3, s, nullptr);
  return {s[0], s[1], s[2]};
}

TruncPair PartyMaterial::TakeTruncPair() {
  AuthShare s[2];
  Take(Lane(MaterialKind::kTruncPair, 0), 2, s, nullptr);
  return {s[0], s[1]};
}

AuthShare PartyMaterial::TakeBit() {
  AuthShare s;
  Take(Lane(MaterialKind::kBit, 0), 1, &s, nullptr);
  return s;
}

MaskShare PartyMaterial::TakeMask(int owner) {
  MaskShare m;
  Take(Lane(MaterialKind::kMask, owner), 1, &m.r, &m.clear);
  return m;
}

Budget PartyMaterial::consumed() const {
  Budget b;
  b.triples = lanes_[0]->high_water;
  b.trunc_pairs = lanes_[1]->high_water;
  b.bits = lanes_[2]->high_water;
  b.masks.resize(n_);
  for (int i = 0; i < n_; ++i) b.masks[i] = lanes_[3 + i]->high_water;
  return b;
}

Budget PartyMaterial::limit() const {
  Budget b;
  b.triples = lanes_[0]->limit;
  b.trunc_pairs = lanes_[1]->limit;
  b.bits = lanes_[2]->limit;
  b.masks.resize(n_);
  for (int i = 0; i < n_; ++i) b.masks[i] = lanes_[3 + i]->limit;
  return b;
}

void PartyMaterial::RewindForTest(MaterialKind kind, uint64_t count, int owner) {
  auto& lane = Lane(kind, owner);
  lane.next -= std::min(count, lane.next);
}

// ------------------------------------------------------------------ dealer

Dealer::Dealer(DealerConfig config) : config_(config) {
  MPML_ENFORCE(config_.field != nullptr, ConfigError, "dealer needs a field");
  MPML_ENFORCE(config_.n_parties >= 2 && config_.n_parties <= 4, ConfigError,
               "n_parties must be in 2..4");
  config_.params.ValidateFor(*config_.field);
}

FieldElement Dealer::mac_key() const {
  FieldElement a = config_.field->Zero();
  for (int j = 0; j < config_.n_parties; ++j) a += MacKeyShare(config_, j);
  return a;
}

FieldElement Dealer::mac_key_share(int party) const {
  return MacKeyShare(config_, party);
}

std::unique_ptr<PartyMaterial> Dealer::Inline(int party,
                                              const Budget* limit) const {
  MPML_ENFORCE(party >= 0 && party < config_.n_parties, ConfigError,
               "party id out of range");
  std::unique_ptr<PartyMaterial> m(new PartyMaterial(
      party, config_.n_parties, *config_.field, config_.params));
  auto t0 = Clock::now();
  m->alpha_share_ = MacKeyShare(config_, party);
  auto add = [&](MaterialKind kind, int owner, uint64_t cap) {
    auto lane = std::make_unique<MaterialLane>();
    lane->name = MaterialKindName(kind);
    if (kind == MaterialKind::kMask) {
      lane->name += "[owner " + std::to_string(owner) + "]";
    }
    lane->per = ElemsPerItem(kind);
    lane->limit = cap;
    lane->fill = Generator(config_, party, kind, owner);
    m->lanes_.push_back(std::move(lane));
  };
  add(MaterialKind::kTriple, 0, limit ? limit->triples : kUnlimited);
  add(MaterialKind::kTruncPair, 0, limit ? limit->trunc_pairs : kUnlimited);
  add(MaterialKind::kBit, 0, limit ? limit->bits : kUnlimited);
  for (int o = 0; o < config_.n_parties; ++o) {
    add(MaterialKind::kMask, o, limit ? limit->mask_count(o) : kUnlimited);
  }
  m->material_seconds_ =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return m;
}

std::vector<std::string> Dealer::WriteFiles(const Budget& budget,
                                            const std::string& prefix,
                                            double* seconds) const {
  auto t0 = Clock::now();
  const int n = config_.n_parties;
  const PrimeField& fd = *config_.field;
  std::vector<std::string> paths;
  std::vector<uint8_t> tmp(fd.byte_length());
  std::vector<AuthShare> shares;
  std::vector<FieldElement> clears;
  for (int party = 0; party < n; ++party) {
    std::string path = prefix + ".p" + std::to_string(party) + ".bin";
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    MPML_ENFORCE(os.good(), ConfigError, "cannot write " + path);
    os.write(kMagic, 4);
    PutLe(os, kVersion, 2);
    PutLe(os, static_cast<uint64_t>(party), 2);
    PutLe(os, static_cast<uint64_t>(n), 2);
    PutLe(os, fd.byte_length(), 2);
    {
      std::vector<uint8_t> mod(fd.byte_length(), 0);
      BigInt m = fd.modulus();
      for (auto& b : mod) {
        b = static_cast<uint8_t>(m & 0xff);
        m >>= 8;
      }
      os.write(reinterpret_cast<const char*>(mod.data()),
               static_cast<std::streamsize>(mod.size()));
    }
    PutLe(os, static_cast<uint64_t>(config_.params.f), 2);
    PutLe(os, static_cast<uint64_t>(config_.params.k), 2);
    PutLe(os, static_cast<uint64_t>(config_.params.s), 2);
    PutLe(os, budget.triples, 8);
    PutLe(os, budget.trunc_pairs, 8);
    PutLe(os, budget.bits, 8);
    for (int o = 0; o < n; ++o) PutLe(os, budget.mask_count(o), 8);
    PutElem(os, MacKeyShare(config_, party), tmp);

    auto dump = [&](MaterialKind kind, int owner, uint64_t count) {
      Generator gen(config_, party, kind, owner);
      for (uint64_t first = 0; first < count; first += kChunk) {
        std::size_t c =
            static_cast<std::size_t>(std::min<uint64_t>(kChunk, count - first));
        gen(first, c, shares, clears);
        for (std::size_t i = 0; i < c; ++i) {
          std::size_t per = ElemsPerItem(kind);
          for (std::size_t e = 0; e < per; ++e) {
            PutElem(os, shares[i * per + e].value, tmp);
            PutElem(os, shares[i * per + e].mac, tmp);
          }
          if (kind == MaterialKind::kMask) PutElem(os, clears[i], tmp);
        }
      }
    };
    dump(MaterialKind::kTriple, 0, budget.triples);
    dump(MaterialKind::kTruncPair, 0, budget.trunc_pairs);
    dump(MaterialKind::kBit, 0, budget.bits);
    for (int o = 0; o < n; ++o) dump(MaterialKind::kMask, o, budget.mask_count(o));
    MPML_ENFORCE(os.good(), ConfigError, "write failed for " + path);
    paths.push_back(path);
  }
  if (seconds) {
    *seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  }
  return paths;
}

std::unique_ptr<PartyMaterial> Dealer::OpenFile(
    const std::string& path, int expected_party, int expected_n,
    const PrimeField& expected_field, const FixedPointParams& expected) {
  auto t0 = Clock::now();
  auto probe = std::make_shared<std::ifstream>(path, std::ios::binary);
  MPML_ENFORCE(probe->good(), ConfigError, "cannot open " + path);
  char magic[4] = {};
  probe->read(magic, 4);
  MPML_ENFORCE(probe->good() && std::equal(magic, magic + 4, kMagic),
               ParseError, path + ": bad magic");
  auto version = GetLe(*probe, 2, "version");
  MPML_ENFORCE(version == kVersion, ParseError,
               path + ": unsupported version " + std::to_string(version));
  int party = static_cast<int>(GetLe(*probe, 2, "party_id"));
  int n = static_cast<int>(GetLe(*probe, 2, "n_parties"));
  std::size_t mod_len = GetLe(*probe, 2, "modulus length");
  MPML_ENFORCE(mod_len > 0 && mod_len <= kMaxLimbs * 8, ParseError,
               path + ": bad modulus length");
  std::vector<uint8_t> mod(mod_len);
  probe->read(reinterpret_cast<char*>(mod.data()),
              static_cast<std::streamsize>(mod_len));
  MPML_ENFORCE(probe->good(), ParseError, path + ": truncated modulus");
  BigInt modulus = 0;
  for (std::size_t i = mod_len; i-- > 0;) modulus = (modulus << 8) | mod[i];
  FixedPointParams params;
  params.f = static_cast<int>(GetLe(*probe, 2, "f"));
  params.k = static_cast<int>(GetLe(*probe, 2, "k"));
  params.s = static_cast<int>(GetLe(*probe, 2, "s"));
  MPML_ENFORCE(party == expected_party && n == expected_n, ConfigError,
               path + ": file is for party " + std::to_string(party) + "/" +
                   std::to_string(n));
  MPML_ENFORCE(modulus == expected_field.modulus(), ConfigError,
               path + ": modulus does not match session");
  MPML_ENFORCE(params == expected, ConfigError,
               path + ": fixed-point params " + params.ToString() +
                   " do not match session " + expected.ToString());
  const PrimeField& fd = expected_field;
  Budget counts;
  counts.triples = GetLe(*probe, 8, "counts");
  counts.trunc_pairs = GetLe(*probe, 8, "counts");
  counts.bits = GetLe(*probe, 8, "counts");
  counts.masks.resize(n);
  for (int o = 0; o < n; ++o) counts.masks[o] = GetLe(*probe, 8, "counts");
  std::vector<uint8_t> tmp(fd.byte_length());

  std::unique_ptr<PartyMaterial> m(new PartyMaterial(party, n, fd, params));
  m->alpha_share_ = GetElem(*probe, fd, tmp);
  std::streamoff offset = probe->tellg();
  const std::streamoff w = static_cast<std::streamoff>(fd.byte_length());

  auto add = [&](MaterialKind kind, int owner, uint64_t count) {
    auto lane = std::make_unique<MaterialLane>();
    lane->name = MaterialKindName(kind);
    if (kind == MaterialKind::kMask) {
      lane->name += "[owner " + std::to_string(owner) + "]";
    }
    const std::size_t per = ElemsPerItem(kind);
    const std::size_t item_elems =
        per * 2 + (kind == MaterialKind::kMask ? 1 : 0);
    lane->per = per;
    lane->limit = count;
    auto is = std::make_shared<std::ifstream>(path, std::ios::binary);
    is->seekg(offset);
    lane->file = is;
    const PrimeField* fp = &fd;
    lane->fill = [is, fp, per, kind](uint64_t, std::size_t cnt,
                                     std::vector<AuthShare>& shares,
                                     std::vector<FieldElement>& clears) {
      std::vector<uint8_t> buf(fp->byte_length());
      shares.clear();
      clears.clear();
      for (std::size_t i = 0; i < cnt; ++i) {
        for (std::size_t e = 0; e < per; ++e) {
          AuthShare s;
          s.value = GetElem(*is, *fp, buf);
          s.mac = GetElem(*is, *fp, buf);
          shares.push_back(s);
        }
        if (kind == MaterialKind::kMask) clears.push_back(GetElem(*is, *fp, buf));
      }
    };
    offset += static_cast<std::streamoff>(count * item_elems) * w;
    m->lanes_.push_back(std::move(lane));
  };
  add(MaterialKind::kTriple, 0, counts.triples);
  add(MaterialKind::kTruncPair, 0, counts.trunc_pairs);
  add(MaterialKind::kBit, 0, counts.bits);
  for (int o = 0; o < n; ++o) add(MaterialKind::kMask, o, counts.mask_count(o));

  probe->seekg(0, std::ios::end);
  MPML_ENFORCE(probe->tellg() == offset, ParseError,
               path + ": file size does not match header counts");
  m->material_seconds_ =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return m;
}

}  // namespace mpml
