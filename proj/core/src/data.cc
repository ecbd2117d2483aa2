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

#include "mpml/data.h"

#include <Eigen/Dense>
#include <boost/algorithm/string.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mpml/errors.h"

namespace mpml {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Dataset Dataset::Columns(std::size_t begin, std::size_t end) const {
  MPML_ENFORCE(begin <= end && end <= d, ConfigError, "column range");
  Dataset out = *this;
  out.d = end - begin;
  out.X.clear();
  out.X.reserve(n * out.d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = begin; j < end; ++j) out.X.push_back(x(i, j));
  }
  return out;
}

Dataset Dataset::Subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.name = name;
  out.task = task;
  out.d = d;
  out.n = rows.size();
  out.X.reserve(out.n * d);
  for (std::size_t r : rows) {
    MPML_ENFORCE(r < n, ConfigError, "row index out of range");
    out.X.insert(out.X.end(), X.begin() + r * d, X.begin() + (r + 1) * d);
    out.y.push_back(y[r]);
  }
  return out;
}

// ------------------------------------------------------------- SynthSpec

namespace {

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("synthetic spec: bad value for " + key + ": '" + v +
                      "'");
  }
}

uint64_t ParseUnsigned(const std::string& key, const std::string& v) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("synthetic spec: bad value for " + key + ": '" + v +
                      "'");
  }
  return out;
}

}  // namespace

SynthSpec SynthSpec::Parse(const std::string& text) {
  SynthSpec s;
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(",;"));
  for (auto part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    auto eq = part.find('=');
    MPML_ENFORCE(eq != std::string::npos, ConfigError,
                 "synthetic spec: expected key=value, got '" + part + "'");
    std::string key = part.substr(0, eq);
    std::string val = part.substr(eq + 1);
    if (key == "d") {
      s.d = ParseUnsigned(key, val);
    } else if (key == "n") {
      s.n = ParseUnsigned(key, val);
    } else if (key == "cond") {
      s.cond = ParseDouble(key, val);
    } else if (key == "noise") {
      s.noise_sd = ParseDouble(key, val);
    } else if (key == "task") {
      s.task = val;
    } else if (key == "seed") {
      s.seed = ParseUnsigned(key, val);
    } else if (key == "signal") {
      s.signal = ParseDouble(key, val);
    } else if (key == "informative") {
      s.informative = ParseUnsigned(key, val);
    } else {
      throw ConfigError("synthetic spec: unknown key '" + key + "'");
    }
  }
  if (s.n == 0) s.task = "spd";
  s.Validate();
  return s;
}

void SynthSpec::Validate() const {
  MPML_ENFORCE(d >= 1, ConfigError, "synthetic spec: d must be >= 1");
  MPML_ENFORCE(cond >= 1.0, ConfigError, "synthetic spec: cond must be >= 1");
  MPML_ENFORCE(noise_sd >= 0.0, ConfigError,
               "synthetic spec: noise must be >= 0");
  MPML_ENFORCE(task == "linear" || task == "logistic" || task == "spd",
               ConfigError,
               "synthetic spec: task must be linear, logistic or spd");
  if (task != "spd") {
    MPML_ENFORCE(n >= d, ConfigError, "synthetic spec: need n >= d");
  }
  MPML_ENFORCE(informative <= d, ConfigError,
               "synthetic spec: informative must be <= d");
}

std::string SynthSpec::ToString() const {
  // Shortest text that parses back to the same double.
  auto num = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  std::string out = "d=" + std::to_string(d) + ";n=" + std::to_string(n) +
                    ";cond=" + num(cond) + ";noise=" + num(noise_sd) +
                    ";task=" + task + ";seed=" + std::to_string(seed);
  if (signal != 1.0) out += ";signal=" + num(signal);
  if (informative != 0) out += ";informative=" + std::to_string(informative);
  return out;
}

// -------------------------------------------------------------- generators

double GaussianSource::Next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = prg_.NextDouble();
  double u2 = prg_.NextDouble();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

namespace {

MatrixXd Gaussian(GaussianSource& g, std::size_t rows, std::size_t cols) {
  MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = g.Next();
  }
  return m;
}

// Orthonormal columns from a QR of a Gaussian matrix; signs fixed so the
// distribution is Haar and the result deterministic.
MatrixXd OrthonormalColumns(GaussianSource& g, std::size_t rows,
                            std::size_t cols) {
  MatrixXd G = Gaussian(g, rows, cols);
  Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(rows, cols);
  MatrixXd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < cols; ++j) {
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

// Geometric from 1 to cond (ascending) over d points.
std::vector<double> GeometricSpectrum(std::size_t d, double cond) {
  std::vector<double> s(d, 1.0);
  for (std::size_t i = 0; i < d && d > 1; ++i) {
    s[i] = std::pow(cond, static_cast<double>(i) / static_cast<double>(d - 1));
  }
  return s;
}

VectorXd TrueWeights(GaussianSource& g, const SynthSpec& spec) {
  VectorXd w(spec.d);
  std::size_t active = spec.informative == 0 ? spec.d : spec.informative;
  for (std::size_t j = 0; j < spec.d; ++j) {
    double v = g.Next();
    w(j) = j < active ? spec.signal * v : 0.0;
  }
  return w;
}

MatrixXd DesignMatrix(GaussianSource& g, const SynthSpec& spec) {
  MatrixXd U = OrthonormalColumns(g, spec.n, spec.d);
  MatrixXd V = OrthonormalColumns(g, spec.d, spec.d);
  auto s = GeometricSpectrum(spec.d, spec.cond);
  VectorXd sv(spec.d);
  // Largest singular value sqrt(n): unit-scale columns on average.
  for (std::size_t i = 0; i < spec.d; ++i) {
    sv(i) = std::sqrt(static_cast<double>(spec.n)) / s[i];
  }
  return U * sv.asDiagonal() * V.transpose();
}

Dataset FromEigen(const std::string& name, Task task, const MatrixXd& X,
                  const VectorXd& y) {
  Dataset ds;
  ds.name = name;
  ds.task = task;
  ds.n = static_cast<std::size_t>(X.rows());
  ds.d = static_cast<std::size_t>(X.cols());
  ds.X.resize(ds.n * ds.d);
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.d; ++j) ds.X[i * ds.d + j] = X(i, j);
  }
  ds.y.assign(y.data(), y.data() + y.size());
  return ds;
}

}  // namespace

LinearSystem GenSpdSystem(const SynthSpec& spec) {
  spec.Validate();
  GaussianSource g(Prg::Derive(spec.seed, "data/spd", {spec.d}));
  MatrixXd Q = OrthonormalColumns(g, spec.d, spec.d);
  auto s = GeometricSpectrum(spec.d, spec.cond);
  VectorXd sv = Eigen::Map<const VectorXd>(s.data(), spec.d);
  MatrixXd A = Q * sv.asDiagonal() * Q.transpose();
  A = (0.5 * (A + A.transpose())).eval();
  VectorXd x(spec.d);
  for (std::size_t i = 0; i < spec.d; ++i) x(i) = g.Next();
  VectorXd b = A * x;
  LinearSystem sys;
  sys.d = spec.d;
  sys.A.resize(spec.d * spec.d);
  for (std::size_t i = 0; i < spec.d; ++i) {
    for (std::size_t j = 0; j < spec.d; ++j) sys.A[i * spec.d + j] = A(i, j);
  }
  sys.b.assign(b.data(), b.data() + b.size());
  sys.x_true.assign(x.data(), x.data() + x.size());
  sys.lambda_min = s.front();
  sys.lambda_max = s.back();
  return sys;
}

Dataset GenRegression(const SynthSpec& spec) {
  spec.Validate();
  GaussianSource g(Prg::Derive(spec.seed, "data/regression",
                               {spec.n, spec.d}));
  MatrixXd X = DesignMatrix(g, spec);
  VectorXd w = TrueWeights(g, spec);
  VectorXd y = X * w;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += spec.noise_sd * g.Next();
  return FromEigen("synthetic-linear", Task::kRegression, X, y);
}

Dataset GenLogistic(const SynthSpec& spec) {
  spec.Validate();
  GaussianSource g(Prg::Derive(spec.seed, "data/logistic", {spec.n, spec.d}));
  MatrixXd X = DesignMatrix(g, spec);
  VectorXd w = TrueWeights(g, spec);
  VectorXd u = X * w;
  VectorXd y(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double p = 1.0 / (1.0 + std::exp(-u(i)));
    y(i) = g.Uniform() < p ? 1.0 : 0.0;
  }
  return FromEigen("synthetic-logistic", Task::kClassification, X, y);
}

Dataset GenDataset(const SynthSpec& spec) {
  if (spec.task == "logistic") return GenLogistic(spec);
  MPML_ENFORCE(spec.task == "linear", ConfigError,
               "synthetic spec describes a linear system, not a dataset");
  return GenRegression(spec);
}

// ------------------------------------------------------------- surrogates

namespace {

Dataset Named(Dataset ds, const std::string& name) {
  ds.name = name;
  return ds;
}

// Mass-spectrometry-like: 700 features driven by a few latent factors whose
// mean shifts with the class, plus 300 pure-noise probe features. Features
// are sparse and non-negative (intensities below a detection floor read 0).
Dataset ArceneLike(uint64_t seed) {
  const std::size_t n = 200;
  const std::size_t d = 1000;
  const std::size_t real = 700;
  const std::size_t factors = 8;
  const double shift = 1.3;
  GaussianSource g(Prg::Derive(seed, "data/arcene", {n, d}));
  MatrixXd loadings(real, factors);
  for (std::size_t j = 0; j < real; ++j) {
    for (std::size_t r = 0; r < factors; ++r) {
      loadings(j, r) = g.Next() / std::sqrt(static_cast<double>(factors));
    }
  }
  MatrixXd X(n, d);
  VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y(i) = i % 2 == 0 ? 1.0 : 0.0;
    VectorXd z(factors);
    for (std::size_t r = 0; r < factors; ++r) z(r) = g.Next();
    z(0) += y(i) > 0 ? shift : -shift;
    for (std::size_t j = 0; j < d; ++j) {
      const double signal = j < real ? loadings.row(j).dot(z) : 0.0;
      const double v = signal + g.Next();
      X(i, j) = v > -0.5 ? 100.0 * (v + 0.5) : 0.0;
    }
  }
  return FromEigen("arcene", Task::kClassification, X, y);
}

}  // namespace

std::vector<std::string> SurrogateNames() {
  return {"student", "auto-mpg", "wine", "mnist-binary", "arcene"};
}

Dataset MakeSurrogate(const std::string& name, uint64_t seed) {
  SynthSpec s;
  s.seed = seed;
  if (name == "student") {
    s.n = 395, s.d = 30, s.cond = 5, s.noise_sd = 0.5, s.informative = 8;
    return Named(GenRegression(s), name);
  }
  if (name == "auto-mpg") {
    s.n = 392, s.d = 7, s.cond = 4, s.noise_sd = 0.4;
    return Named(GenRegression(s), name);
  }
  if (name == "wine") {
    s.n = 1599, s.d = 11, s.cond = 3, s.noise_sd = 0.8;
    return Named(GenRegression(s), name);
  }
  if (name == "mnist-binary") {
    s.n = 2000, s.d = 50, s.cond = 3, s.task = "logistic", s.signal = 1.0;
    return Named(GenLogistic(s), name);
  }
  if (name == "arcene") return ArceneLike(seed);
  throw ConfigError("unknown surrogate '" + name + "'");
}

// -------------------------------------------------------------------- CSV

Dataset ParseCsv(const std::string& text, const CsvOptions& options,
                 const std::string& name) {
  Dataset ds;
  ds.name = name;
  ds.task = options.task;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  std::vector<double> cells;
  bool skipped_header = !options.header;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (boost::trim_copy(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<std::string> fields;
    boost::split(fields, line, boost::is_any_of(","));
    if (width == 0) {
      width = fields.size();
      MPML_ENFORCE(width >= 2, ParseError,
                   "CSV row " + std::to_string(row) +
                       ": need at least one feature and a target");
    } else if (fields.size() != width) {
      throw ParseError("CSV row " + std::to_string(row) + ": expected " +
                       std::to_string(width) + " columns, found " +
                       std::to_string(fields.size()));
    }
    cells.clear();
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::string f = boost::trim_copy(fields[c]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() ||
          !std::isfinite(v)) {
        throw ParseError("CSV row " + std::to_string(row) + ", column " +
                         std::to_string(c + 1) + ": not a number: '" + f +
                         "'");
      }
      cells.push_back(v);
    }
    int tc = options.target_column < 0
                 ? static_cast<int>(width) - 1
                 : options.target_column;
    MPML_ENFORCE(tc >= 0 && static_cast<std::size_t>(tc) < width, ConfigError,
                 "CSV target column out of range");
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<int>(c) == tc) {
        ds.y.push_back(cells[c]);
      } else {
        ds.X.push_back(cells[c]);
      }
    }
    ++ds.n;
  }
  MPML_ENFORCE(ds.n > 0, ParseError, "CSV has no data rows");
  ds.d = width - 1;
  if (ds.task == Task::kClassification) {
    for (std::size_t i = 0; i < ds.n; ++i) {
      MPML_ENFORCE(ds.y[i] == 0.0 || ds.y[i] == 1.0, ParseError,
                   "CSV row " + std::to_string(i + 1) +
                       ": classification labels must be 0 or 1");
    }
  }
  return ds;
}

Dataset LoadCsv(const std::string& path, const CsvOptions& options) {
  std::ifstream f(path, std::ios::binary);
  MPML_ENFORCE(f.good(), ConfigError, "cannot open dataset '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return ParseCsv(buf.str(), options, path);
}

std::string ToCsv(const Dataset& ds) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.d; ++j) os << ds.x(i, j) << ',';
    os << ds.y[i] << '\n';
  }
  return os.str();
}

void SaveCsv(const Dataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  MPML_ENFORCE(f.good(), ConfigError, "cannot write '" + path + "'");
  f << ToCsv(ds);
}

// ---------------------------------------------------------- preprocessing

Standardizer FitStandardizer(const Dataset& ds, bool target) {
  MPML_ENFORCE(ds.n > 0, ConfigError, "cannot standardize an empty dataset");
  Standardizer st;
  st.mean.assign(ds.d, 0.0);
  st.sd.assign(ds.d, 1.0);
  const double n = static_cast<double>(ds.n);
  for (std::size_t j = 0; j < ds.d; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < ds.n; ++i) m += ds.x(i, j);
    m /= n;
    double v = 0.0;
    for (std::size_t i = 0; i < ds.n; ++i) {
      double e = ds.x(i, j) - m;
      v += e * e;
    }
    double sd = std::sqrt(v / n);
    st.mean[j] = m;
    st.sd[j] = sd > 0 ? sd : 1.0;
  }
  st.target = target && ds.task == Task::kRegression;
  if (st.target) {
    double m = std::accumulate(ds.y.begin(), ds.y.end(), 0.0) / n;
    double v = 0.0;
    for (double t : ds.y) v += (t - m) * (t - m);
    double sd = std::sqrt(v / n);
    st.y_mean = m;
    st.y_sd = sd > 0 ? sd : 1.0;
  }
  return st;
}

void ApplyStandardizer(Dataset& ds, const Standardizer& st) {
  MPML_ENFORCE(st.mean.size() == ds.d, ConfigError,
               "standardizer dimension mismatch");
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.d; ++j) {
      double& v = ds.X[i * ds.d + j];
      v = (v - st.mean[j]) / st.sd[j];
    }
  }
  if (st.target) {
    for (double& t : ds.y) t = (t - st.y_mean) / st.y_sd;
  }
}

void Standardize(Dataset& ds, bool target) {
  ApplyStandardizer(ds, FitStandardizer(ds, target));
}

std::pair<Dataset, Dataset> Split(const Dataset& ds, double train_fraction,
                                  uint64_t seed) {
  MPML_ENFORCE(train_fraction > 0.0 && train_fraction < 1.0, ConfigError,
               "train fraction must be in (0, 1)");
  std::vector<std::size_t> perm(ds.n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Prg prg = Prg::Derive(seed, "data/split", {ds.n});
  for (std::size_t i = ds.n; i > 1; --i) {
    std::swap(perm[i - 1], perm[prg.NextBelow(i)]);
  }
  const auto cut = static_cast<std::size_t>(
      std::floor(static_cast<double>(ds.n) * train_fraction));
  MPML_ENFORCE(cut >= 1 && cut < ds.n, ConfigError,
               "split leaves an empty part");
  std::vector<std::size_t> train(perm.begin(), perm.begin() + cut);
  std::vector<std::size_t> test(perm.begin() + cut, perm.end());
  return {ds.Subset(train), ds.Subset(test)};
}

std::vector<std::pair<std::size_t, std::size_t>> VPartition(
    std::size_t d, int n_parties) {
  MPML_ENFORCE(n_parties >= 1, ConfigError, "need at least one party");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t base = d / n_parties;
  const std::size_t extra = d % n_parties;
  std::size_t pos = 0;
  for (int p = 0; p < n_parties; ++p) {
    std::size_t len = base + (static_cast<std::size_t>(p) < extra ? 1 : 0);
    out.emplace_back(pos, pos + len);
    pos += len;
  }
  return out;
}

int ColumnOwner(std::size_t j, std::size_t d, int n_parties) {
  auto blocks = VPartition(d, n_parties);
  for (int p = 0; p < n_parties; ++p) {
    if (j >= blocks[p].first && j < blocks[p].second) return p;
  }
  throw ConfigError("column index out of range");
}

}  // namespace mpml
