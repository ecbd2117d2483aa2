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

#include "cli_options.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mpml::cli {
namespace {

double ToDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("--" + key + ": not a number: '" + v + "'");
}

template <class T>
T ToInt(const std::string& key, const std::string& v) {
  T x{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  MPML_ENFORCE(ec == std::errc() && ptr == v.data() + v.size(), ConfigError,
               "--" + key + ": not an integer: '" + v + "'");
  return x;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v.empty() || v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ConfigError("--" + key + ": expected true or false, got '" + v + "'");
}

TamperSpec ParseTamper(const std::string& v) {
  // "", "P:I" or "P:I:mac"
  TamperSpec t;
  t.party = 1;
  t.opening_index = 0;
  if (v.empty()) return t;
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  MPML_ENFORCE(parts.size() == 2 || parts.size() == 3, ConfigError,
               "--inject-tamper expects PARTY:OPENING[:mac]");
  t.party = ToInt<int>("inject-tamper", parts[0]);
  t.opening_index = ToInt<uint64_t>("inject-tamper", parts[1]);
  if (parts.size() == 3) {
    MPML_ENFORCE(parts[2] == "mac", ConfigError,
                 "--inject-tamper: third field must be 'mac'");
    t.mac = true;
  }
  return t;
}

}  // namespace

const std::vector<std::string>& ValueKeys() {
  static const std::vector<std::string> keys = {
      "algo",          "mode",         "parties",       "precision",
      "bits",          "stat-sec",     "iterations",    "epochs",
      "batch",         "lr",           "activation",    "dataset",
      "target-column", "synthetic",    "surrogate",     "d",
      "n",             "cond",         "dealer",        "seed",
      "reps",          "transport",    "train-fraction", "ridge",
      "recip-iterations", "sqrt-iterations", "mac-interval",
      "inject-tamper"};
  return keys;
}

const std::vector<std::string>& FlagKeys() {
  static const std::vector<std::string> keys = {"trace", "header",
                                                "no-standardize"};
  return keys;
}

ExperimentConfig ConfigFromOptions(const Options& options) {
  for (const auto& [k, v] : options) {
    const auto& vk = ValueKeys();
    const auto& fk = FlagKeys();
    MPML_ENFORCE(std::find(vk.begin(), vk.end(), k) != vk.end() ||
                     std::find(fk.begin(), fk.end(), k) != fk.end(),
                 ConfigError, "unknown option '" + k + "'");
  }
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = options.find(k);
    return it == options.end() ? nullptr : &it->second;
  };
  ExperimentConfig cfg;
  cfg.reps = 5;
  if (auto v = get("algo")) cfg.algo = ParseAlgo(*v);
  if (auto v = get("mode")) cfg.mode = ParseMode(*v);
  if (auto v = get("parties")) cfg.n_parties = ToInt<int>("parties", *v);
  int f = 28, k = 0, s = 40;
  if (auto v = get("precision")) f = ToInt<int>("precision", *v);
  if (auto v = get("bits")) k = ToInt<int>("bits", *v);
  if (auto v = get("stat-sec")) s = ToInt<int>("stat-sec", *v);
  cfg.params = FixedPointParams::WithPrecision(f, k, s);

  if (auto v = get("synthetic")) cfg.synthetic = SynthSpec::Parse(*v);
  for (const char* key : {"d", "n", "cond"}) {
    auto v = get(key);
    if (!v) continue;
    MPML_ENFORCE(cfg.synthetic.has_value(), ConfigError,
                 std::string("--") + key + " needs --synthetic");
    if (std::string(key) == "d") cfg.synthetic->d = ToInt<std::size_t>(key, *v);
    if (std::string(key) == "n") cfg.synthetic->n = ToInt<std::size_t>(key, *v);
    if (std::string(key) == "cond") cfg.synthetic->cond = ToDouble(key, *v);
  }
  if (auto v = get("surrogate")) cfg.surrogate = *v;
  if (auto v = get("dataset")) cfg.dataset_path = *v;
  if (auto v = get("header")) cfg.csv.header = ToBool("header", *v);
  if (auto v = get("target-column")) {
    cfg.csv.target_column = ToInt<int>("target-column", *v);
  }
  if (auto v = get("no-standardize")) {
    cfg.standardize = !ToBool("no-standardize", *v);
  }
  if (auto v = get("train-fraction")) {
    cfg.train_fraction = ToDouble("train-fraction", *v);
  }
  if (auto v = get("ridge")) cfg.ridge = ToDouble("ridge", *v);

  cfg.sgd.activation.kind = cfg.algo == Algo::kSgdLogistic
                                ? ActivationKind::kPiecewise
                                : ActivationKind::kLinear;
  if (auto v = get("activation")) cfg.sgd.activation = Activation::Parse(*v);
  if (auto v = get("iterations")) {
    if (IsSolver(cfg.algo)) {
      cfg.iterations = ToInt<int>("iterations", *v);
    } else {
      cfg.sgd.iterations = ToInt<std::size_t>("iterations", *v);
    }
  }
  if (auto v = get("epochs")) cfg.sgd.epochs = ToInt<int>("epochs", *v);
  if (auto v = get("batch")) cfg.sgd.batch = ToInt<std::size_t>("batch", *v);
  if (auto v = get("lr")) cfg.sgd.learning_rate = ToDouble("lr", *v);
  if (auto v = get("recip-iterations")) {
    cfg.nonlinear.reciprocal_iterations = ToInt<int>("recip-iterations", *v);
  }
  if (auto v = get("sqrt-iterations")) {
    cfg.nonlinear.sqrt_iterations = ToInt<int>("sqrt-iterations", *v);
  }
  if (auto v = get("seed")) cfg.seed = ToInt<uint64_t>("seed", *v);
  cfg.sgd.shuffle_seed = cfg.seed;
  if (auto v = get("reps")) cfg.reps = ToInt<int>("reps", *v);
  if (auto v = get("transport")) cfg.transport = ParseTransport(*v);
  if (auto v = get("dealer")) cfg.dealer = *v;
  if (auto v = get("mac-interval")) {
    cfg.mac_check_interval = ToInt<uint64_t>("mac-interval", *v);
  }
  if (auto v = get("trace")) cfg.trace = ToBool("trace", *v);
  if (auto v = get("inject-tamper")) cfg.tamper = ParseTamper(*v);
  cfg.Validate();
  return cfg;
}

std::vector<Options> ExpandGrid(const std::string& json_text) {
  using Json = nlohmann::ordered_json;
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("grid file: ") + e.what());
  }
  MPML_ENFORCE(doc.is_object(), ParseError, "grid file must be an object");
  auto to_text = [](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  };
  Options base;
  if (doc.contains("base")) {
    MPML_ENFORCE(doc["base"].is_object(), ParseError,
                 "grid 'base' must be an object");
    for (const auto& [k, v] : doc["base"].items()) base[k] = to_text(v);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  if (doc.contains("axes")) {
    MPML_ENFORCE(doc["axes"].is_object(), ParseError,
                 "grid 'axes' must be an object");
    for (const auto& [k, v] : doc["axes"].items()) {
      MPML_ENFORCE(v.is_array() && !v.empty(), ParseError,
                   "grid axis '" + k + "' must be a non-empty array");
      std::vector<std::string> vals;
      for (const auto& x : v) vals.push_back(to_text(x));
      axes.emplace_back(k, std::move(vals));
    }
  }
  for (const auto& [k, v] : doc.items()) {
    MPML_ENFORCE(k == "base" || k == "axes", ParseError,
                 "grid file: unknown key '" + k + "'");
  }
  std::vector<Options> cells = {base};
  for (const auto& [key, vals] : axes) {
    std::vector<Options> next;
    for (const auto& cell : cells) {
      for (const auto& v : vals) {
        Options o = cell;
        o[key] = v;
        next.push_back(std::move(o));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kParse:
    case ErrorKind::kRange:
    case ErrorKind::kDomain:
      return kExitConfig;
    case ErrorKind::kConnection:
      return kExitConnection;
    case ErrorKind::kMacCheck:
      return kExitMacAbort;
    case ErrorKind::kPreprocessingExhausted:
      return kExitExhausted;
    case ErrorKind::kProtocol:
    case ErrorKind::kNumerical:
      return kExitOther;
  }
  return kExitOther;
}

void AppendResults(const std::string& path,
                   const std::vector<std::string>& rows) {
  bool need_header = true;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    MPML_ENFORCE(first == ResultsHeader(), ConfigError,
                 path + ": existing header does not match results schema " +
                     std::to_string(kResultsSchemaVersion));
    need_header = false;
  }
  std::ofstream out(path, std::ios::app);
  MPML_ENFORCE(out.good(), ConfigError, "cannot write " + path);
  if (need_header) out << ResultsHeader() << '\n';
  for (const auto& r : rows) out << r << '\n';
}

void CheckPartiesAgree(const std::vector<ExperimentResult>& results) {
  for (const auto& r : results) {
    const auto& a = results.front();
    MPML_ENFORCE(r.opened == a.opened && r.residual == a.residual &&
                     r.rmse == a.rmse && r.accuracy == a.accuracy &&
                     r.transcript == a.transcript,
                 ProtocolError,
                 "party " + std::to_string(r.party) +
                     " disagrees with party 0 on outputs or transcript");
  }
}

}  // namespace mpml::cli
