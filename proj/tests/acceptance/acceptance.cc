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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. `acceptance 3 7` runs a subset.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mpml/experiment.h"
#include "mpml/prg.h"
#include "plots.h"
#include "test_util.h"

namespace mpml::acceptance {
namespace {

// ------------------------------------------------------------ tolerances

// 1: protocol soundness
constexpr int kShareRoundTrips = 10000;
constexpr int kBeaverPairs = 1000;
constexpr int kTamperTrials = 1000;
// 2: fixed-point error, in units of 2^-f (mul, inner) and 2^-(f-4)
// (relative, sqrt and reciprocal)
constexpr int kArithCases = 10000;
constexpr int kInnerLength = 10;
constexpr int kNonlinearCases = 1000;
constexpr double kNonlinearLo = 0.01;
constexpr double kNonlinearHi = 100.0;
// 3: solver accuracy
constexpr double kMaxResidual = 1e-6;
constexpr double kCgdVsDirectFactor = 10.0;
constexpr double kCgd20vs25 = 0.01;
// 4: cost scaling
constexpr double kDirectSlope = 3.0;
constexpr double kCgdSlope = 2.0;
constexpr double kSlopeTolerance = 0.3;
// 5: SGD fidelity
constexpr double kMaxRmseRatio = 1.25;
// 6: precision sensitivity, percentage points
constexpr double kHighDimMinDrop = 2.0;
constexpr double kLowDimMaxGap = 1.0;
// 7: activations
constexpr int kPiecewiseGrid = 1001;
constexpr double kPiecewiseUlps = 2.0;
constexpr double kTaylorMaxGap = 2.0;  // percentage points

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

using testing::LocalCfg;

double Ulp(int f) { return std::ldexp(1.0, -f); }

// Value of the fixed-point encoding of x, as a long double.
long double Encoded(double x, int f) {
  return std::ldexp(std::round(std::ldexp(static_cast<long double>(x), f)), -f);
}

std::string Fmt(double v) { return fmt::format("{:.3g}", v); }

// ------------------------------------------------------------ criterion 1

Outcome ProtocolSoundness() {
  const auto params = FixedPointParams::WithPrecision(28);
  const PrimeField& F = DefaultFieldFor(params);
  Prg prg(Sha256::Hash(std::span<const uint8_t>()), 1);
  std::vector<FieldElement> xs, ys;
  for (int i = 0; i < kShareRoundTrips; ++i) xs.push_back(prg.NextField(F));
  for (int i = 0; i < kBeaverPairs; ++i) ys.push_back(prg.NextField(F));

  // Round trips and products, honest, at every party count.
  std::size_t round_trip_errors = 0, product_errors = 0;
  for (int n : {2, 3, 4}) {
    auto outs = RunLocal(LocalCfg(n, params, 100 + n), [&](Engine& e) {
      auto x = e.Input(0, e.party_id() == 0 ? xs : std::vector<FieldElement>{},
                       xs.size());
      auto y = e.Input(n - 1,
                       e.party_id() == n - 1 ? ys : std::vector<FieldElement>{},
                       ys.size());
      auto opened = e.Open(x);
      auto z = e.Mul(std::span<const AuthShare>(x.data(), ys.size()), y);
      auto prod = e.Open(z);
      opened.insert(opened.end(), prod.begin(), prod.end());
      return opened;
    });
    for (const auto& o : outs) {
      for (int i = 0; i < kShareRoundTrips; ++i) {
        round_trip_errors += !(o.result[i] == xs[i]);
      }
      for (int i = 0; i < kBeaverPairs; ++i) {
        product_errors += !(o.result[kShareRoundTrips + i] == xs[i] * ys[i]);
      }
    }
  }

  // Single-tamper trials: random party, opening, value or MAC share.
  std::mt19937_64 rng(7);
  int detected = 0, wrong_error = 0;
  constexpr int kWidth = 6;
  constexpr int kOpenings = 3 * kWidth;  // Mul opens 2w, then w results
  for (int t = 0; t < kTamperTrials; ++t) {
    const int n = 2 + static_cast<int>(rng() % 3);
    auto cfg = LocalCfg(n, params, 1000 + t);
    TamperSpec ts;
    ts.party = static_cast<int>(rng() % n);
    ts.opening_index = rng() % kOpenings;
    ts.mac = rng() % 2 == 1;
    ts.delta = BigInt(1 + rng() % 1000000);
    cfg.engine.tamper = ts;
    try {
      RunLocal(cfg, [&](Engine& e) {
        std::vector<FieldElement> v(xs.begin(), xs.begin() + kWidth);
        auto x = e.Input(0, e.party_id() == 0 ? v : std::vector<FieldElement>{},
                         kWidth);
        auto z = e.Mul(x, x);
        e.Open(z);
        return 0;
      });
    } catch (const MacCheckError&) {
      ++detected;
    } catch (const std::exception&) {
      ++wrong_error;
    }
  }
  Outcome o;
  o.pass = round_trip_errors == 0 && product_errors == 0 &&
           detected == kTamperTrials;
  o.detail = fmt::format(
      "{} round trips x 3 party counts: {} mismatches; {} Beaver products: {} "
      "mismatches; tamper trials aborted at MAC check: {}/{} (other errors {})",
      kShareRoundTrips, round_trip_errors, kBeaverPairs, product_errors,
      detected, kTamperTrials, wrong_error);
  return o;
}

// ------------------------------------------------------------ criterion 2

Outcome FixedPointErrors() {
  std::string detail;
  bool pass = true;
  for (int f : {13, 28}) {
    const auto params = FixedPointParams::WithPrecision(f);
    std::mt19937_64 rng(f);
    // Products below 2^(k-f) in magnitude: |x|,|y| <= 50 for mul and 20 for
    // length-10 inner products.
    std::uniform_real_distribution<double> mul_dist(-50, 50), in_dist(-20, 20);
    std::vector<double> mx(kArithCases), my(kArithCases);
    for (auto& v : mx) v = mul_dist(rng);
    for (auto& v : my) v = mul_dist(rng);
    std::vector<double> ix(kArithCases * kInnerLength),
        iy(kArithCases * kInnerLength);
    for (auto& v : ix) v = in_dist(rng);
    for (auto& v : iy) v = in_dist(rng);
    std::uniform_real_distribution<double> logu(std::log(kNonlinearLo),
                                                std::log(kNonlinearHi));
    std::vector<double> nx(kNonlinearCases);
    for (auto& v : nx) v = std::exp(logu(rng));

    auto out = testing::RunSecure1(2, params, [&](SecureBackend& b) {
      using V = AuthShare;
      auto x = b.Input(0, mx, mx.size());
      auto y = b.Input(1, my, my.size());
      auto prod = b.Open(fxg::Mul(b, std::span<const V>(x), std::span<const V>(y)));
      auto a = b.Input(0, ix, ix.size());
      auto c = b.Input(1, iy, iy.size());
      std::vector<fxg::Vec<SecureBackend>> xs, ys;
      for (int i = 0; i < kArithCases; ++i) {
        xs.emplace_back(a.begin() + i * kInnerLength,
                        a.begin() + (i + 1) * kInnerLength);
        ys.emplace_back(c.begin() + i * kInnerLength,
                        c.begin() + (i + 1) * kInnerLength);
      }
      auto inner = b.Open(fxg::InnerMany(b, xs, ys));
      auto u = b.Input(0, nx, nx.size());
      auto sr = b.SqrtInvSqrt(u);
      auto sq = b.Open(sr.sqrt);
      auto isq = b.Open(sr.inv_sqrt);
      auto rc = b.Open(b.Reciprocal(u));
      std::vector<double> all = prod;
      all.insert(all.end(), inner.begin(), inner.end());
      all.insert(all.end(), sq.begin(), sq.end());
      all.insert(all.end(), rc.begin(), rc.end());
      all.insert(all.end(), isq.begin(), isq.end());
      return all;
    });
    double mul_err = 0, inner_err = 0, sqrt_rel = 0, isqrt_rel = 0,
           recip_rel = 0;
    double recip_rel_small = 0;  // outputs >= 1/16
    for (int i = 0; i < kArithCases; ++i) {
      long double exact = Encoded(mx[i], f) * Encoded(my[i], f);
      mul_err = std::max(mul_err, static_cast<double>(std::fabs(out[i] - exact)));
      long double s = 0;
      for (int j = 0; j < kInnerLength; ++j) {
        s += Encoded(ix[i * kInnerLength + j], f) *
             Encoded(iy[i * kInnerLength + j], f);
      }
      inner_err = std::max(
          inner_err, static_cast<double>(std::fabs(out[kArithCases + i] - s)));
    }
    for (int i = 0; i < kNonlinearCases; ++i) {
      long double x = Encoded(nx[i], f);
      long double es = std::sqrt(x), er = 1.0L / x;
      double rs = static_cast<double>(
          std::fabs(out[2 * kArithCases + i] - es) / es);
      double rr = static_cast<double>(
          std::fabs(out[2 * kArithCases + kNonlinearCases + i] - er) / er);
      long double ei = 1.0L / es;
      double ri = static_cast<double>(
          std::fabs(out[2 * kArithCases + 2 * kNonlinearCases + i] - ei) / ei);
      sqrt_rel = std::max(sqrt_rel, rs);
      isqrt_rel = std::max(isqrt_rel, ri);
      recip_rel = std::max(recip_rel, rr);
      if (er >= 1.0L / 16) recip_rel_small = std::max(recip_rel_small, rr);
    }
    const double ulp = Ulp(f), rel = Ulp(f - 4);
    const bool ok = mul_err <= ulp && inner_err <= ulp && sqrt_rel <= rel &&
                    isqrt_rel <= rel && recip_rel <= rel;
    pass = pass && ok;
    detail += fmt::format(
        "{}f={}: mul {:.3f} ulp, inner {:.3f} ulp, sqrt {:.2f}x bound, "
        "inv_sqrt {:.2f}x bound, reciprocal {:.2f}x bound (outputs >= 1/16: "
        "{:.2f}x)",
        detail.empty() ? "" : "; ", f, mul_err / ulp, inner_err / ulp,
        sqrt_rel / rel, isqrt_rel / rel, recip_rel / rel,
        recip_rel_small / rel);
  }
  return {pass, detail};
}

// ------------------------------------------------------------ criterion 3

ExperimentConfig SolverCell(Algo algo, std::size_t d, double cond, int f,
                            int iterations = 20) {
  ExperimentConfig cfg;
  cfg.algo = algo;
  cfg.params = FixedPointParams::WithPrecision(f);
  SynthSpec s;
  s.d = d;
  s.n = 0;
  s.cond = cond;
  s.task = "spd";
  s.seed = 1;
  cfg.synthetic = s;
  cfg.iterations = iterations;
  cfg.n_parties = 2;
  cfg.reps = 1;
  cfg.Validate();
  return cfg;
}

Outcome SolverAccuracy() {
  bool residual_ok = true, cgd15_ok = true, plateau_ok = true;
  double worst_residual = 0, worst_cgd15_ratio = 0, worst_plateau = 0;
  std::string cells;
  for (std::size_t d : {10u, 20u, 50u}) {
    for (double cond : {1.0, 5.0, 10.0}) {
      auto res = [&](Algo a, int f, int it) {
        return RunExperiment(SolverCell(a, d, cond, f, it))[0];
      };
      double ldlt = res(Algo::kLdlt, 60, 20).residual;
      double chol = res(Algo::kCholesky, 60, 20).residual;
      double cgd20 = res(Algo::kCgd, 60, 20).residual;
      double cgd15 = res(Algo::kCgd, 60, 15).residual;
      for (double r : {ldlt, chol, cgd20}) {
        worst_residual = std::max(worst_residual, r);
        residual_ok = residual_ok && r <= kMaxResidual;
      }
      const double direct = std::max(ldlt, chol);
      const double ratio = cgd15 / direct;
      worst_cgd15_ratio = std::max(worst_cgd15_ratio, ratio);
      cgd15_ok = cgd15_ok && ratio <= kCgdVsDirectFactor;
      // Accuracy is 1 - relative error of the solution.
      auto a20 = res(Algo::kCgd, 28, 20), a25 = res(Algo::kCgd, 28, 25);
      const double acc20 = 1 - a20.rel_error, acc25 = 1 - a25.rel_error;
      const double gap = std::fabs(acc20 - acc25) / acc25;
      worst_plateau = std::max(worst_plateau, gap);
      plateau_ok = plateau_ok && gap <= kCgd20vs25;
      cells += fmt::format(
          "\n    d={:<3} cond={:<3} f=60 residual ldlt {:.1e} cholesky {:.1e} "
          "cgd20 {:.1e} cgd15 {:.1e} | f=28 cgd rel.error 20 it {:.2e}, "
          "25 it {:.2e}",
          d, cond, ldlt, chol, cgd20, cgd15, a20.rel_error, a25.rel_error);
    }
  }
  Outcome o;
  o.pass = residual_ok && cgd15_ok && plateau_ok;
  o.detail = fmt::format(
      "f=60 worst residual {:.2e} (<= {:g}: {}); CGD(15)/direct residual worst "
      "{:.3g}x (<= {:g}x: {}); f=28 CGD 20 vs 25 iterations accuracy gap "
      "worst {:.2e} (<= {:g}: {}){}",
      worst_residual, kMaxResidual, residual_ok ? "ok" : "no",
      worst_cgd15_ratio, kCgdVsDirectFactor, cgd15_ok ? "ok" : "no",
      worst_plateau, kCgd20vs25, plateau_ok ? "ok" : "no", cells);
  return o;
}

// ------------------------------------------------------------ criterion 4

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

Outcome CostScaling() {
  const std::vector<double> dims = {10, 20, 50, 100};
  std::vector<double> ldlt, chol, cgd;
  std::string counts;
  for (double d : dims) {
    const auto dd = static_cast<std::size_t>(d);
    auto triples = [&](Algo a, int it) {
      return static_cast<double>(EstimateCost(SolverCell(a, dd, 5, 28, it)).triples);
    };
    ldlt.push_back(triples(Algo::kLdlt, 20));
    chol.push_back(triples(Algo::kCholesky, 20));
    // Per iteration: difference between 20 and 10 iterations.
    cgd.push_back((triples(Algo::kCgd, 20) - triples(Algo::kCgd, 10)) / 10);
    counts += fmt::format(" d={}: {:.0f}/{:.0f}/{:.0f}", dd, ldlt.back(),
                          chol.back(), cgd.back());
  }
  const double sl = LogLogSlope(dims, ldlt), sc = LogLogSlope(dims, chol),
               sg = LogLogSlope(dims, cgd);
  auto near = [](double s, double t) { return std::fabs(s - t) <= kSlopeTolerance; };
  Outcome o;
  o.pass = near(sl, kDirectSlope) && near(sc, kDirectSlope) && near(sg, kCgdSlope);
  o.detail = fmt::format(
      "f=28 triple-count slopes: ldlt {:.2f}, cholesky {:.2f} (target {:g} +- "
      "{:g}), cgd per iteration {:.2f} (target {:g} +- {:g}); triples "
      "ldlt/cholesky/cgd-per-iteration:{}",
      sl, sc, kDirectSlope, kSlopeTolerance, sg, kCgdSlope, kSlopeTolerance,
      counts);
  return o;
}

// ------------------------------------------------------------ criterion 5

ExperimentConfig SgdCell(Algo algo, Mode mode, int f) {
  ExperimentConfig cfg;
  cfg.algo = algo;
  cfg.mode = mode;
  cfg.params = FixedPointParams::WithPrecision(f);
  cfg.sgd.activation.kind =
      algo == Algo::kSgdLogistic ? ActivationKind::kPiecewise
                                 : ActivationKind::kLinear;
  return cfg;
}

Outcome SgdFidelity() {
  bool pass = true;
  std::string detail;
  for (const std::string ds : {"synthetic", "student", "auto-mpg", "wine"}) {
    auto make = [&](Mode m) {
      auto cfg = SgdCell(Algo::kSgdLinear, m, 28);
      if (ds == "synthetic") {
        cfg.synthetic = SynthSpec::Parse("d=10,n=1000,seed=1");
      } else {
        cfg.surrogate = ds;
      }
      cfg.Validate();
      return RunExperiment(cfg)[0];
    };
    auto sec = make(Mode::kSecure);
    auto dbl = make(Mode::kPlainDouble);
    auto fix = make(Mode::kPlainFixed);
    const double ratio = sec.rmse / dbl.rmse;
    double wdiff = 0;
    for (std::size_t i = 0; i < sec.opened.size(); ++i) {
      wdiff = std::max(wdiff, std::fabs(sec.opened[i] - fix.opened[i]));
    }
    const double bound =
        static_cast<double>(sec.steps) * (sec.d + 2) * Ulp(sec.config.params.f);
    const bool ok = ratio <= kMaxRmseRatio && wdiff <= bound;
    pass = pass && ok;
    detail += fmt::format(
        "{}{}: rmse secure {:.4f} / double {:.4f} = {:.3f}; |w_sec - w_fixed| "
        "{:.2e} <= {:.2e} (T={}, d={})",
        detail.empty() ? "" : "; ", ds, sec.rmse, dbl.rmse, ratio, wdiff, bound,
        sec.steps, sec.d);
  }
  return {pass, detail};
}

// ------------------------------------------------------------ criterion 6

Outcome PrecisionSensitivity() {
  auto acc = [](const std::string& ds, int f) {
    auto cfg = SgdCell(Algo::kSgdLogistic, Mode::kSecure, f);
    cfg.surrogate = ds;
    cfg.train_fraction = 0.5;
    cfg.Validate();
    return 100.0 * RunExperiment(cfg)[0].accuracy;
  };
  const double hi13 = acc("arcene", 13), hi28 = acc("arcene", 28);
  const double lo13 = acc("mnist-binary", 13), lo28 = acc("mnist-binary", 28);
  const bool hi_ok = hi28 - hi13 >= kHighDimMinDrop;
  const bool lo_ok = std::fabs(lo28 - lo13) <= kLowDimMaxGap;
  Outcome o;
  o.pass = hi_ok && lo_ok;
  o.detail = fmt::format(
      "arcene-like (d=1000): f=13 {:.1f}%, f=28 {:.1f}%, drop {:.1f} points "
      "(>= {:g}: {}); mnist-binary-like (d=50): f=13 {:.1f}%, f=28 {:.1f}%, "
      "gap {:.1f} points (<= {:g}: {})",
      hi13, hi28, hi28 - hi13, kHighDimMinDrop, hi_ok ? "ok" : "no", lo13, lo28,
      std::fabs(lo28 - lo13), kLowDimMaxGap, lo_ok ? "ok" : "no");
  return o;
}

// ------------------------------------------------------------ criterion 7

Outcome Activations() {
  // Piecewise on a grid over [-2, 2].
  double worst_ulps = 0;
  for (int f : {13, 28}) {
    const auto params = FixedPointParams::WithPrecision(f);
    std::vector<double> grid(kPiecewiseGrid);
    for (int i = 0; i < kPiecewiseGrid; ++i) {
      grid[i] = -2.0 + 4.0 * i / (kPiecewiseGrid - 1);
    }
    auto out = testing::RunSecure1(2, params, [&](SecureBackend& b) {
      auto u = b.Input(0, grid, grid.size());
      return b.Open(fxg::Piecewise(b, std::span<const AuthShare>(u)));
    });
    for (int i = 0; i < kPiecewiseGrid; ++i) {
      const double u = static_cast<double>(Encoded(grid[i], f));
      const double want = u < -0.5 ? 0.0 : (u > 0.5 ? 1.0 : u + 0.5);
      worst_ulps = std::max(worst_ulps, std::fabs(out[i] - want) / Ulp(f));
    }
  }
  const bool pw_ok = worst_ulps <= kPiecewiseUlps;

  // Taylor(10) against the exact logistic on bounded-margin data.
  auto logistic = [](Mode m, const std::string& act) {
    auto cfg = SgdCell(Algo::kSgdLogistic, m, 28);
    cfg.synthetic = SynthSpec::Parse("d=10,n=1000,task=logistic,signal=0.5,seed=3");
    cfg.sgd.activation = Activation::Parse(act);
    cfg.Validate();
    return RunExperiment(cfg)[0];
  };
  const double exact = 100 * logistic(Mode::kPlainDouble, "exact").accuracy;
  const double taylor = 100 * logistic(Mode::kSecure, "taylor:10").accuracy;
  const bool taylor_ok = std::fabs(exact - taylor) <= kTaylorMaxGap;

  // Timing table: every Taylor degree and the piecewise baseline.
  std::vector<std::string> rows;
  bool timings_ok = true;
  for (const std::string ds : {"mnist-binary", "synthetic"}) {
    for (const std::string act :
         {"piecewise", "taylor:2", "taylor:5", "taylor:7", "taylor:10"}) {
      auto cfg = SgdCell(Algo::kSgdLogistic, Mode::kSecure, 28);
      if (ds == "synthetic") {
        cfg.synthetic =
            SynthSpec::Parse("d=10,n=1000,task=logistic,signal=0.5,seed=3");
      } else {
        cfg.surrogate = ds;
      }
      cfg.sgd.activation = Activation::Parse(act);
      cfg.sgd.iterations = 5;
      cfg.Validate();
      auto r = RunExperiment(cfg)[0];
      timings_ok = timings_ok && r.offline_seconds > 0 && r.online_seconds > 0;
      rows.push_back(ToCsvRow(r));
    }
  }
  std::string text = ResultsHeader() + "\n";
  for (const auto& r : rows) text += r + "\n";
  std::string table = cli::ActivationTable(ParseResultsCsv(text));
  timings_ok = timings_ok && !table.empty();
  std::string indented;
  std::istringstream is(table);
  for (std::string line; std::getline(is, line);) indented += "\n    " + line;

  Outcome o;
  o.pass = pw_ok && taylor_ok && timings_ok;
  o.detail = fmt::format(
      "piecewise worst {:.2f} ulp over {} points at f=13,28 (<= {:g}: {}); "
      "logistic accuracy exact (plaintext) {:.1f}% vs taylor:10 (secure) "
      "{:.1f}% (gap <= {:g}: {}); activation timings (5 steps):{}",
      worst_ulps, kPiecewiseGrid, kPiecewiseUlps, pw_ok ? "ok" : "no", exact,
      taylor, kTaylorMaxGap, taylor_ok ? "ok" : "no", indented);
  return o;
}

// ------------------------------------------------------------ criterion 8

Outcome MultiParty() {
  std::vector<ExperimentResult> rs;
  for (int n : {2, 3, 4}) {
    auto cfg = SolverCell(Algo::kCholesky, 20, 5, 28);
    cfg.n_parties = n;
    auto all = RunExperiment(cfg);
    for (const auto& r : all) {
      if (r.opened != all[0].opened) return {false, "parties disagree"};
    }
    rs.push_back(all[0]);
  }
  auto metrics = [](const ExperimentResult& r) {
    // The metric columns of a result row.
    auto rec = ParseResultsCsv(ResultsHeader() + "\n" + ToCsvRow(r) + "\n")[0];
    std::string s;
    for (const char* c : {"d", "cond", "f", "residual", "rel_error", "rmse",
                          "accuracy", "triples", "trunc_pairs", "bits",
                          "solution_digest"}) {
      s += rec.at(c) + ";";
    }
    return s;
  };
  bool same = true;
  for (const auto& r : rs) {
    same = same && r.opened == rs[0].opened && metrics(r) == metrics(rs[0]);
  }
  return {same, fmt::format("cholesky d=20 f=28, n=2,3,4: opened solutions "
                            "{}, residual {:.3e}, masks {}/{}/{}",
                            same ? "identical" : "differ", rs[0].residual,
                            rs[0].masks, rs[1].masks, rs[2].masks)};
}

// ------------------------------------------------------------ criterion 9

int RunTool(const std::string& args) {
  std::string cmd = std::string(MPML_TOOL_PATH) + " " + args + " >/dev/null";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome Determinism() {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "mpml_acceptance_golden";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cell =
      "--synthetic d=6,n=0,cond=3,seed=4 --algo cgd --iterations 5 "
      "--precision 28 --reps 1 --parties 3 --trace";
  const std::string sgd =
      "--surrogate auto-mpg --algo sgd-linear --precision 28 --reps 1 "
      "--epochs 2";
  std::vector<std::string> masked;
  for (const char* run : {"a", "b", "tcp"}) {
    const auto out = (dir / (std::string(run) + ".csv")).string();
    const std::string transport =
        std::string(run) == "tcp" ? " --transport tcp" : "";
    if (RunTool("run " + cell + transport + " --out " + out) != 0 ||
        RunTool("run " + sgd + transport + " --out " + out) != 0) {
      return {false, std::string("tool run failed: ") + run};
    }
    masked.push_back(MaskTimings(ReadFile(out)));
  }
  const bool consecutive = masked[0] == masked[1];
  const bool transports = masked[0] == masked[2];
  bool golden = true;
  std::string golden_note = "no golden directory";
  if (const char* g = std::getenv("MPML_GOLDEN_DIR")) {
    auto path = fs::path(g) / "acceptance_runs.csv";
    if (std::getenv("MPML_UPDATE_GOLDEN")) {
      std::ofstream(path) << masked[0];
    }
    golden = fs::exists(path) && ReadFile(path) == masked[0];
    golden_note = golden ? "matches golden file" : "differs from golden file";
  }
  fs::remove_all(dir);
  return {consecutive && transports && golden,
          fmt::format("two consecutive runs {}; loopback vs tcp {}; {}",
                      consecutive ? "byte-identical" : "differ",
                      transports ? "byte-identical" : "differ", golden_note)};
}

}  // namespace
}  // namespace mpml::acceptance

int main(int argc, char** argv) {
  using namespace mpml::acceptance;
  const std::vector<Criterion> all = {
      {1, "protocol soundness", ProtocolSoundness},
      {2, "fixed-point error bounds", FixedPointErrors},
      {3, "solver accuracy", SolverAccuracy},
      {4, "cost scaling", CostScaling},
      {5, "SGD fidelity", SgdFidelity},
      {6, "precision sensitivity", PrecisionSensitivity},
      {7, "activation suite", Activations},
      {8, "multi-party generality", MultiParty},
      {9, "determinism and golden files", Determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    failed += !o.pass;
    std::printf("%s  criterion %d (%s, %.1fs): %s\n", o.pass ? "PASS" : "FAIL",
                c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
