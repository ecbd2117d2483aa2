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

#include "mpml/field.h"

namespace mpml {

// One party's additive share of a secret x together with its share of the
// MAC alpha * x. Linear operations are local.
struct AuthShare {
  FieldElement value;
  FieldElement mac;

  AuthShare& operator+=(const AuthShare& o) {
    value += o.value;
    mac += o.mac;
    return *this;
  }
  AuthShare& operator-=(const AuthShare& o) {
    value -= o.value;
    mac -= o.mac;
    return *this;
  }
  AuthShare& operator*=(const FieldElement& c) {
    value *= c;
    mac *= c;
    return *this;
  }
  friend AuthShare operator+(AuthShare a, const AuthShare& b) { return a += b; }
  friend AuthShare operator-(AuthShare a, const AuthShare& b) { return a -= b; }
  friend AuthShare operator*(AuthShare a, const FieldElement& c) {
    return a *= c;
  }
  friend AuthShare operator*(const FieldElement& c, AuthShare a) {
    return a *= c;
  }
  AuthShare operator-() const { return {-value, -mac}; }
};

struct Triple {
  AuthShare a;
  AuthShare b;
  AuthShare c;
};

// r_full uniform in [0, 2^(k+f+s)), r_top = floor(r_full / 2^f).
struct TruncPair {
  AuthShare r_full;
  AuthShare r_top;
};

// Input mask; clear is the mask value at its owner and zero elsewhere.
struct MaskShare {
  AuthShare r;
  FieldElement clear;
};

}  // namespace mpml
