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

#include "mpml/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <Eigen/Dense>

#include "mpml/plain_backend.h"

namespace mpml {

Algo ParseAlgo(const std::string& name) {
  if (name == "ldlt") return Algo::kLdlt;
  if (name == "cholesky") return Algo::kCholesky;
  if (name == "cgd") return Algo::kCgd;
  if (name == "sgd-linear") return Algo::kSgdLinear;
  if (name == "sgd-logistic") return Algo::kSgdLogistic;
  throw ConfigError("unknown algorithm '" + name +
                    "' (ldlt|cholesky|cgd|sgd-linear|sgd-logistic)");
}

const char* AlgoName(Algo a) {
  switch (a) {
    case Algo::kLdlt:
      return "ldlt";
    case Algo::kCholesky:
      return "cholesky";
    case Algo::kCgd:
      return "cgd";
    case Algo::kSgdLinear:
      return "sgd-linear";
    case Algo::kSgdLogistic:
      return "sgd-logistic";
  }
  return "?";
}

Mode ParseMode(const std::string& name) {
  if (name == "secure") return Mode::kSecure;
  if (name == "plaintext-double") return Mode::kPlainDouble;
  if (name == "plaintext-fixed") return Mode::kPlainFixed;
  throw ConfigError("unknown mode '" + name +
                    "' (secure|plaintext-double|plaintext-fixed)");
}

const char* ModeName(Mode m) {
  switch (m) {
    case Mode::kSecure:
      return "secure";
    case Mode::kPlainDouble:
      return "plaintext-double";
    case Mode::kPlainFixed:
      return "plaintext-fixed";
  }
  return "?";
}

bool IsSolver(Algo a) {
  return a == Algo::kLdlt || a == Algo::kCholesky || a == Algo::kCgd;
}

namespace {

SolverConfig SolverFor(const ExperimentConfig& cfg) {
  SolverConfig s;
  switch (cfg.algo) {
    case Algo::kLdlt:
      s.method = SolverMethod::kLdlt;
      break;
    case Algo::kCholesky:
      s.method = SolverMethod::kCholesky;
      break;
    default:
      s.method = SolverMethod::kCgd;
      break;
  }
  s.cgd_iterations = cfg.iterations;
  return s;
}

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// |A x - b| / |b|.
double RelResidual(const LinearSystem& sys, const std::vector<double>& x) {
  std::vector<double> r(sys.d);
  for (std::size_t i = 0; i < sys.d; ++i) {
    double acc = -sys.b[i];
    for (std::size_t j = 0; j < sys.d; ++j) acc += sys.A[i * sys.d + j] * x[j];
    r[i] = acc;
  }
  const double nb = Norm(sys.b);
  return nb > 0 ? Norm(r) / nb : Norm(r);
}

double RelError(const std::vector<double>& x, const std::vector<double>& ref) {
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - ref[i];
  const double nr = Norm(ref);
  return nr > 0 ? Norm(diff) / nr : Norm(diff);
}

std::string SolutionDigest(const std::vector<double>& v) {
  Sha256 h;
  for (double x : v) h.Update(Num(x) + ";");
  auto d = h.Final();
  return ToHex(d);
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void ExperimentConfig::Validate() const {
  MPML_ENFORCE(n_parties >= 2 || mode != Mode::kSecure, ConfigError,
               "secure mode needs at least two parties");
  MPML_ENFORCE(n_parties >= 1, ConfigError, "need at least one party");
  params.Validate();
  const int sources = (synthetic ? 1 : 0) + (surrogate.empty() ? 0 : 1) +
                      (dataset_path.empty() ? 0 : 1);
  MPML_ENFORCE(sources == 1, ConfigError,
               "give exactly one of --synthetic, --surrogate or --dataset");
  if (synthetic) synthetic->Validate();
  MPML_ENFORCE(train_fraction > 0.0 && train_fraction <= 1.0, ConfigError,
               "train fraction must lie in (0, 1]");
  MPML_ENFORCE(reps >= 1, ConfigError, "reps must be at least 1");
  MPML_ENFORCE(ridge >= 0.0, ConfigError, "ridge must be non-negative");
  if (algo == Algo::kCgd) {
    MPML_ENFORCE(iterations >= 1, ConfigError,
                 "CGD needs at least one iteration");
  }
  if (!IsSolver(algo)) {
    MPML_ENFORCE(!(synthetic && synthetic->is_system()), ConfigError,
                 "SGD needs a dataset, not a linear system (set n > 0)");
    if (algo == Algo::kSgdLinear) {
      MPML_ENFORCE(sgd.activation.kind == ActivationKind::kLinear, ConfigError,
                   "sgd-linear uses the identity activation");
    } else {
      MPML_ENFORCE(sgd.activation.kind != ActivationKind::kLinear, ConfigError,
                   "sgd-logistic needs piecewise, taylor:D or exact");
    }
    if (sgd.activation.kind == ActivationKind::kExact) {
      MPML_ENFORCE(mode == Mode::kPlainDouble, ConfigError,
                   "the exact logistic activation exists only in "
                   "plaintext-double mode");
    }
  }
  if (!dealer.empty() && dealer != "inline") {
    MPML_ENFORCE(dealer.rfind("files:", 0) == 0 && dealer.size() > 6,
                 ConfigError, "dealer must be 'inline' or 'files:DIR'");
  }
}

std::string ExperimentConfig::DataLabel() const {
  if (synthetic) return "synthetic:" + synthetic->ToString();
  if (!surrogate.empty()) return "surrogate:" + surrogate;
  return "csv:" + std::filesystem::path(dataset_path).filename().string();
}

std::string ExperimentConfig::Descriptor() const {
  std::ostringstream os;
  os << "algo=" << AlgoName(algo) << ";mode=" << ModeName(mode)
     << ";data=" << DataLabel() << ";train=" << Num(train_fraction)
     << ";std=" << standardize << ";it=" << iterations
     << ";rit=" << nonlinear.reciprocal_iterations
     << ";sit=" << nonlinear.sqrt_iterations << ";ridge=" << Num(ridge)
     << ";lr=" << Num(sgd.learning_rate) << ";batch=" << sgd.batch
     << ";epochs=" << sgd.epochs << ";steps=" << sgd.iterations
     << ";act=" << sgd.activation.Name() << ";shuffle=" << sgd.shuffle_seed
     << ";seed=" << seed << ";mac=" << mac_check_interval
     << ";trace=" << trace << ";csv=" << csv.header << ","
     << csv.target_column;
  return os.str();
}

// ----------------------------------------------------------- input

namespace {

SystemBounds BoundsOf(const LinearSystem& sys) {
  SystemBounds bounds;
  bounds.d = sys.d;
  bounds.lambda_min = sys.lambda_min;
  bounds.lambda_max = sys.lambda_max;
  bounds.rhs_norm = Norm(sys.b);
  return bounds;
}

// Plaintext normal equations of the training split, for range analysis and
// metrics. Matches NormalEquations().
LinearSystem PlainNormalEquations(const Dataset& ds, double lambda) {
  const auto d = static_cast<Eigen::Index>(ds.d);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      X(ds.X.data(), static_cast<Eigen::Index>(ds.n), d);
  Eigen::Map<const Eigen::VectorXd> y(ds.y.data(),
                                      static_cast<Eigen::Index>(ds.n));
  Eigen::MatrixXd A = X.transpose() * X;
  A.diagonal().array() += lambda * static_cast<double>(ds.n);
  Eigen::VectorXd b = X.transpose() * y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A,
                                                     Eigen::EigenvaluesOnly);
  LinearSystem sys;
  sys.d = ds.d;
  sys.A.resize(ds.d * ds.d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) sys.A[i * d + j] = A(i, j);
  }
  sys.b.assign(b.data(), b.data() + d);
  Eigen::VectorXd x = A.ldlt().solve(b);
  sys.x_true.assign(x.data(), x.data() + d);
  sys.lambda_min = eig.eigenvalues().minCoeff();
  sys.lambda_max = eig.eigenvalues().maxCoeff();
  return sys;
}

}  // namespace

PreparedInput PrepareInput(const ExperimentConfig& cfg) {
  cfg.Validate();
  PreparedInput in;
  if (cfg.synthetic && cfg.synthetic->is_system()) {
    MPML_ENFORCE(IsSolver(cfg.algo), ConfigError,
                 "a linear system needs ldlt, cholesky or cgd");
    in.system = true;
    in.sys = GenSpdSystem(*cfg.synthetic);
    in.d = in.sys.d;
    in.bounds = BoundsOf(in.sys);
    return in;
  }
  Dataset ds;
  if (cfg.synthetic) {
    SynthSpec spec = *cfg.synthetic;
    if (cfg.algo == Algo::kSgdLogistic) spec.task = "logistic";
    ds = GenDataset(spec);
  } else if (!cfg.surrogate.empty()) {
    ds = MakeSurrogate(cfg.surrogate, cfg.seed);
  } else {
    CsvOptions opts = cfg.csv;
    opts.task = cfg.algo == Algo::kSgdLogistic ? Task::kClassification
                                               : Task::kRegression;
    ds = LoadCsv(cfg.dataset_path, opts);
  }
  if (cfg.algo == Algo::kSgdLogistic) {
    MPML_ENFORCE(ds.task == Task::kClassification, ConfigError,
                 "sgd-logistic needs a classification dataset");
  }
  if (cfg.standardize) Standardize(ds, ds.task == Task::kRegression);
  if (cfg.train_fraction < 1.0) {
    auto [train, test] = Split(ds, cfg.train_fraction, cfg.seed);
    in.train = std::move(train);
    in.test = std::move(test);
  } else {
    in.train = ds;
    in.test = ds;
  }
  MPML_ENFORCE(in.train.n > 0 && in.test.n > 0, ConfigError,
               "empty training or test split");
  in.d = ds.d;
  if (IsSolver(cfg.algo)) {
    in.sys = PlainNormalEquations(in.train, cfg.ridge);
    MPML_ENFORCE(in.sys.lambda_min > 0, ConfigError,
                 "normal equations are singular; use a positive ridge");
    in.bounds = BoundsOf(in.sys);
  } else {
    cfg.sgd.Validate(in.train.n);
  }
  return in;
}

int InputOwner(std::size_t column, std::size_t d, int n_parties) {
  if (column >= d) return n_parties - 1;
  return ColumnOwner(column, d, n_parties);
}

template <class B>
ProgramOutput RunProgram(B& b, const ExperimentConfig& cfg,
                         const PreparedInput& in, int party) {
  using V = typename B::Value;
  using OI = typename B::OwnedInput;
  const int n = b.n_parties();
  const std::size_t d = in.d;
  // party < 0: plaintext run, every value is known.
  auto owns = [&](int owner) { return party < 0 || party == owner; };

  // Column j of the matrix (or data) belongs to ColumnOwner(j); the target
  // belongs to the last party. Everything is shared in one round.
  std::vector<OI> req;
  const std::size_t len = in.system ? d : in.train.n;
  for (std::size_t j = 0; j <= d; ++j) {
    OI r;
    r.owner = InputOwner(j, d, n);
    r.count = len;
    if (owns(r.owner)) {
      if (j == d) {
        r.values = in.system ? in.sys.b : in.train.y;
      } else if (in.system) {
        for (std::size_t i = 0; i < d; ++i) {
          r.values.push_back(in.sys.A[i * d + j]);
        }
      } else {
        for (std::size_t i = 0; i < len; ++i) {
          r.values.push_back(in.train.x(i, j));
        }
      }
    }
    req.push_back(std::move(r));
  }
  auto cols = b.InputMany(req);

  ProgramOutput out;
  if (IsSolver(cfg.algo)) {
    SMat<B> A;
    fxg::Vec<B> rhs;
    if (in.system) {
      A = SMat<B>(d, d, b.Zero());
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) A(i, j) = cols[j][i];
      }
      rhs = cols[d];
    } else {
      std::vector<fxg::Vec<B>> rows(len, fxg::Vec<B>(d, b.Zero()));
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < len; ++i) rows[i][j] = cols[j][i];
      }
      auto [NA, nb] = NormalEquations(b, rows, cols[d], cfg.ridge);
      A = std::move(NA);
      rhs = std::move(nb);
    }
    CgdObserver<B> obs;
    if (cfg.trace) {
      obs = [&](int, const fxg::Vec<B>& x) {
        out.trace.push_back(b.Open(std::span<const V>(x)));
      };
    }
    auto x = Solve(b, A, rhs, SolverFor(cfg), obs);
    out.opened = b.Open(std::span<const V>(x));
    return out;
  }

  std::vector<fxg::Vec<B>> rows(len, fxg::Vec<B>(d, b.Zero()));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < len; ++i) rows[i][j] = cols[j][i];
  }
  SgdConfig sgd = cfg.sgd;
  SgdObserver<B> obs;
  const std::size_t per_epoch = len / sgd.batch;
  if (cfg.trace) {
    obs = [&](std::size_t step, const fxg::Vec<B>& w) {
      if (step % per_epoch == 0) {
        out.trace.push_back(b.Open(std::span<const V>(w)));
      }
    };
  }
  auto w = SgdTrain(b, rows, cols[d], sgd, obs);
  out.opened = b.Open(std::span<const V>(w));
  return out;
}

template ProgramOutput RunProgram<SecureBackend>(SecureBackend&,
                                                 const ExperimentConfig&,
                                                 const PreparedInput&, int);
template ProgramOutput RunProgram<PlainDoubleBackend>(PlainDoubleBackend&,
                                                      const ExperimentConfig&,
                                                      const PreparedInput&,
                                                      int);
template ProgramOutput RunProgram<PlainFixedBackend>(PlainFixedBackend&,
                                                     const ExperimentConfig&,
                                                     const PreparedInput&,
                                                     int);
template ProgramOutput RunProgram<CountingBackend>(CountingBackend&,
                                                   const ExperimentConfig&,
                                                   const PreparedInput&, int);

// ----------------------------------------------------------- metrics

void ComputeMetrics(const ExperimentConfig& cfg, const PreparedInput& in,
                    const ProgramOutput& out, ExperimentResult& r) {
  r.opened = out.opened;
  r.trace.clear();
  r.d = in.d;
  r.n = in.system ? 0
                  : in.train.n + (cfg.train_fraction < 1.0 ? in.test.n : 0);
  if (IsSolver(cfg.algo)) {
    r.residual = RelResidual(in.sys, out.opened);
    r.rel_error = RelError(out.opened, in.sys.x_true);
    for (const auto& x : out.trace) r.trace.push_back(RelResidual(in.sys, x));
    r.steps = cfg.algo == Algo::kCgd ? static_cast<std::size_t>(cfg.iterations)
                                     : 0;
    if (!in.system) {
      Metrics m = Evaluate(out.opened, in.test.X, in.test.d, in.test.y,
                           Task::kRegression);
      r.rmse = m.rmse;
    }
    return;
  }
  const Task task = in.train.task;
  Metrics m = Evaluate(out.opened, in.test.X, in.test.d, in.test.y, task);
  r.rmse = m.rmse;
  r.accuracy = task == Task::kClassification ? m.accuracy : 0.0;
  for (const auto& w : out.trace) {
    Metrics t = Evaluate(w, in.test.X, in.test.d, in.test.y, task);
    r.trace.push_back(task == Task::kClassification ? t.accuracy : t.rmse);
  }
  r.steps = cfg.sgd.Steps(in.train.n);
}

// ----------------------------------------------------------- runs

namespace {

void CheckRange(const ExperimentConfig& cfg, const PreparedInput& in) {
  if (IsSolver(cfg.algo) && cfg.mode != Mode::kPlainDouble) {
    CheckSolverRange(cfg.params, SolverFor(cfg), in.bounds);
  }
}

LocalRunConfig LocalConfig(const ExperimentConfig& cfg) {
  LocalRunConfig lc;
  lc.n_parties = cfg.n_parties;
  lc.field = &DefaultFieldFor(cfg.params);
  lc.params = cfg.params;
  lc.dealer_seed = cfg.seed;
  lc.engine.mac_check_interval = cfg.mac_check_interval;
  lc.engine.coin_seed = cfg.seed;
  lc.engine.tamper = cfg.tamper;
  lc.transport = cfg.transport;
  lc.descriptor = cfg.Descriptor();
  if (cfg.dealer.rfind("files:", 0) == 0) {
    lc.material_prefix = cfg.dealer.substr(6) + "/material";
  }
  return lc;
}

void FillFromReport(const PartyReport& rep, ExperimentResult& r) {
  r.party = rep.party;
  r.rounds = rep.stats.rounds;
  r.bytes_sent = rep.stats.total_sent();
  r.triples = rep.consumed.triples;
  r.trunc_pairs = rep.consumed.trunc_pairs;
  r.bits = rep.consumed.bits;
  r.masks = rep.consumed.masks_total();
  r.mac_checks = rep.counters.mac_checks;
  r.offline_seconds = rep.material_seconds;
  r.online_seconds = std::max(0.0, rep.stats.online_seconds -
                                       rep.material_seconds);
  r.transcript = ToHex(rep.transcript);
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<ExperimentResult> RunSecureOnce(const ExperimentConfig& cfg,
                                            const PreparedInput& in) {
  const LocalRunConfig lc = LocalConfig(cfg);
  auto outcomes = RunLocal(lc, [&](Engine& e) {
    SecureBackend sb(e, cfg.nonlinear);
    return RunProgram(sb, cfg, in, e.party_id());
  });
  std::vector<ExperimentResult> results;
  for (const auto& o : outcomes) {
    ExperimentResult r;
    r.config = cfg;
    ComputeMetrics(cfg, in, o.result, r);
    FillFromReport(o.report, r);
    results.push_back(std::move(r));
  }
  return results;
}

ExperimentResult RunPlainOnce(const ExperimentConfig& cfg,
                              const PreparedInput& in) {
  ExperimentResult r;
  r.config = cfg;
  const auto t0 = std::chrono::steady_clock::now();
  ProgramOutput out;
  if (cfg.mode == Mode::kPlainDouble) {
    PlainDoubleBackend be(cfg.params, cfg.n_parties);
    out = RunProgram(be, cfg, in, -1);
  } else {
    PlainFixedBackend be(cfg.params, cfg.n_parties, cfg.nonlinear);
    out = RunProgram(be, cfg, in, -1);
  }
  r.online_seconds = Seconds(t0);
  ComputeMetrics(cfg, in, out, r);
  return r;
}

}  // namespace

std::vector<ExperimentResult> RunExperiment(const ExperimentConfig& cfg) {
  PreparedInput in = PrepareInput(cfg);
  CheckRange(cfg, in);
  std::vector<std::vector<ExperimentResult>> reps;
  for (int rep = 0; rep < cfg.reps; ++rep) {
    if (cfg.mode == Mode::kSecure) {
      reps.push_back(RunSecureOnce(cfg, in));
    } else {
      reps.push_back({RunPlainOnce(cfg, in)});
    }
  }
  std::vector<ExperimentResult> out = reps.front();
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::vector<double> off, on;
    for (const auto& rr : reps) {
      MPML_ENFORCE(rr[p].opened == out[p].opened, ProtocolError,
                   "repetitions produced different outputs");
      off.push_back(rr[p].offline_seconds);
      on.push_back(rr[p].online_seconds);
    }
    out[p].offline_seconds = Median(off);
    out[p].online_seconds = Median(on);
  }
  return out;
}

ExperimentResult RunDistributedParty(const ExperimentConfig& cfg,
                                     const net::PartyConfig& party) {
  MPML_ENFORCE(cfg.mode == Mode::kSecure, ConfigError,
               "distributed runs are secure-mode only");
  PreparedInput in = PrepareInput(cfg);
  CheckRange(cfg, in);
  LocalRunConfig lc = LocalConfig(cfg);
  auto session = net::ConnectAll(
      party, ParamsDigest(*lc.field, cfg.params, cfg.n_parties,
                          cfg.Descriptor()));
  try {
    auto material = MakeMaterial(lc, party.party_id);
    Engine engine(*session, *material, lc.engine);
    SecureBackend sb(engine, cfg.nonlinear);
    ProgramOutput out = RunProgram(sb, cfg, in, party.party_id);
    engine.Finish();
    PartyReport rep;
    rep.party = party.party_id;
    rep.stats = session->stats();
    rep.consumed = material->consumed();
    rep.counters = engine.counters();
    rep.material_seconds = material->material_seconds();
    rep.transcript = session->TranscriptDigest();
    ExperimentResult r;
    r.config = cfg;
    ComputeMetrics(cfg, in, out, r);
    FillFromReport(rep, r);
    return r;
  } catch (const std::exception& e) {
    session->Abort(e.what());
    throw;
  }
}

Cost EstimateCost(const ExperimentConfig& cfg, const PreparedInput& in) {
  CountingBackend cb(cfg.params, cfg.n_parties, cfg.nonlinear);
  RunProgram(cb, cfg, in, 0);
  return cb.cost();
}

Cost EstimateCost(const ExperimentConfig& cfg) {
  return EstimateCost(cfg, PrepareInput(cfg));
}

double DealFiles(const ExperimentConfig& cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const Cost c = EstimateCost(cfg);
  Dealer dealer({&DefaultFieldFor(cfg.params), cfg.params, cfg.n_parties,
                 cfg.seed});
  double seconds = 0.0;
  dealer.WriteFiles(c.ToBudget(cfg.n_parties), dir + "/material", &seconds);
  return seconds;
}

// ----------------------------------------------------------- CSV

const std::vector<std::string>& ResultColumns() {
  static const std::vector<std::string> cols = {
      "schema_version", "algo",       "mode",        "parties",
      "d",              "n",          "cond",        "f",
      "k",              "s",          "iterations",  "activation",
      "batch",          "lr",         "epochs",      "steps",
      "seed",           "dataset",    "rounds",      "bytes_sent",
      "triples",        "trunc_pairs", "bits",       "masks",
      "mac_checks",     "residual",   "rel_error",   "rmse",
      "accuracy",       "trace",      "transcript",  "solution_digest",
      "offline_seconds", "online_seconds"};
  return cols;
}

const std::vector<std::string>& TimingColumns() {
  static const std::vector<std::string> cols = {"offline_seconds",
                                                "online_seconds"};
  return cols;
}

std::string ResultsHeader() {
  std::string out;
  for (const auto& c : ResultColumns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string ToCsvRow(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const double cond = c.synthetic ? c.synthetic->cond : 0.0;
  const bool sgd = !IsSolver(c.algo);
  std::string trace;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (i) trace += ';';
    trace += Num(r.trace[i]);
  }
  std::vector<std::string> f = {
      std::to_string(kResultsSchemaVersion),
      AlgoName(c.algo),
      ModeName(c.mode),
      std::to_string(c.n_parties),
      std::to_string(r.d),
      std::to_string(r.n),
      Num(cond),
      std::to_string(c.params.f),
      std::to_string(c.params.k),
      std::to_string(c.params.s),
      c.algo == Algo::kCgd ? std::to_string(c.iterations) : "0",
      sgd ? c.sgd.activation.Name() : "",
      sgd ? std::to_string(c.sgd.batch) : "0",
      sgd ? Num(c.sgd.learning_rate) : "0",
      sgd ? std::to_string(c.sgd.epochs) : "0",
      std::to_string(r.steps),
      std::to_string(c.seed),
      c.DataLabel(),
      std::to_string(r.rounds),
      std::to_string(r.bytes_sent),
      std::to_string(r.triples),
      std::to_string(r.trunc_pairs),
      std::to_string(r.bits),
      std::to_string(r.masks),
      std::to_string(r.mac_checks),
      Num(r.residual),
      Num(r.rel_error),
      Num(r.rmse),
      Num(r.accuracy),
      trace,
      r.transcript,
      SolutionDigest(r.opened),
      Num(r.offline_seconds),
      Num(r.online_seconds)};
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ',';
    // Data labels may contain commas.
    if (f[i].find(',') != std::string::npos) {
      out += '"' + f[i] + '"';
    } else {
      out += f[i];
    }
  }
  return out;
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<CsvRecord> ParseResultsCsv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<CsvRecord> out;
  if (!std::getline(is, line)) return out;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  MPML_ENFORCE(line == ResultsHeader(), ConfigError,
               "results header does not match schema version " +
                   std::to_string(kResultsSchemaVersion));
  const auto& cols = ResultColumns();
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = SplitCsvLine(line);
    MPML_ENFORCE(fields.size() == cols.size(), ParseError,
                 "results line " + std::to_string(lineno) + ": expected " +
                     std::to_string(cols.size()) + " fields, got " +
                     std::to_string(fields.size()));
    CsvRecord rec;
    for (std::size_t i = 0; i < cols.size(); ++i) rec[cols[i]] = fields[i];
    out.push_back(std::move(rec));
  }
  return out;
}

std::string MaskTimings(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  const auto& cols = ResultColumns();
  std::vector<bool> mask(cols.size(), false);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (const auto& t : TimingColumns()) mask[i] = mask[i] || cols[i] == t;
  }
  const std::string header = ResultsHeader();
  while (std::getline(is, line)) {
    if (line == header || line.empty()) {
      out += line + '\n';
      continue;
    }
    auto fields = SplitCsvLine(line);
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) row += ',';
      std::string v = i < mask.size() && mask[i] ? "-" : fields[i];
      row += v.find(',') != std::string::npos ? '"' + v + '"' : v;
    }
    out += row + '\n';
  }
  return out;
}

}  // namespace mpml
