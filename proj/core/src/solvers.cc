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

#include "mpml/solvers.h"

#include <algorithm>
#include <sstream>

namespace mpml {

SolverMethod ParseSolverMethod(const std::string& name) {
  if (name == "ldlt") return SolverMethod::kLdlt;
  if (name == "cholesky") return SolverMethod::kCholesky;
  if (name == "cgd") return SolverMethod::kCgd;
  throw ConfigError("unknown solver '" + name + "' (ldlt|cholesky|cgd)");
}

const char* SolverMethodName(SolverMethod m) {
  switch (m) {
    case SolverMethod::kLdlt:
      return "ldlt";
    case SolverMethod::kCholesky:
      return "cholesky";
    case SolverMethod::kCgd:
      return "cgd";
  }
  return "?";
}

void CheckSolverRange(const FixedPointParams& params, const SolverConfig& cfg,
                      const SystemBounds& bounds) {
  MPML_ENFORCE(bounds.lambda_min > 0 && bounds.lambda_max >= bounds.lambda_min,
               ConfigError, "invalid eigenvalue bounds");
  if (cfg.method == SolverMethod::kCgd) {
    MPML_ENFORCE(cfg.cgd_iterations >= 1, ConfigError,
                 "CGD needs at least one iteration");
  }
  // Square roots and reciprocals accept inputs below 2^(k-f-1).
  const double limit = std::ldexp(1.0, params.k - params.f - 1);
  const double cond = bounds.lambda_max / bounds.lambda_min;
  double worst = std::max(bounds.lambda_max, bounds.rhs_norm);
  const char* what = "matrix entries or right-hand side";
  double solution = bounds.rhs_norm / bounds.lambda_min;
  if (solution > worst) {
    worst = solution;
    what = "solution";
  }
  switch (cfg.method) {
    case SolverMethod::kLdlt:
    case SolverMethod::kCholesky: {
      double forward = bounds.rhs_norm * std::sqrt(cond);
      if (forward > worst) {
        worst = forward;
        what = "forward substitution";
      }
      break;
    }
    case SolverMethod::kCgd: {
      double dir = bounds.rhs_norm * (1.0 + cond);
      if (dir * dir > worst) {
        worst = dir * dir;
        what = "squared search direction";
      }
      break;
    }
  }
  if (worst >= limit) {
    std::ostringstream os;
    os << SolverMethodName(cfg.method) << " at f=" << params.f
       << ", k=" << params.k << ": " << what << " may reach " << worst
       << ", above the representable bound " << limit
       << "; increase the precision";
    throw ConfigError(os.str());
  }
}

}  // namespace mpml
