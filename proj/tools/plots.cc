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

#include "plots.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mpml/errors.h"

namespace mpml::cli {
namespace {

double Field(const CsvRecord& r, const std::string& key) {
  auto it = r.find(key);
  if (it == r.end() || it->second.empty()) return 0.0;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ParseError("results column " + key + ": not a number: '" +
                     it->second + "'");
  }
}

const std::string& Text(const CsvRecord& r, const std::string& key) {
  static const std::string empty;
  auto it = r.find(key);
  return it == r.end() ? empty : it->second;
}

bool IsSolverRow(const CsvRecord& r) {
  const auto& a = Text(r, "algo");
  return a == "ldlt" || a == "cholesky" || a == "cgd";
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Accumulates points; duplicates at the same x are averaged (geometric mean
// on log axes).
class SeriesBuilder {
 public:
  explicit SeriesBuilder(bool log_y) : log_y_(log_y) {}
  void Add(const std::string& series, double x, double y) {
    if (log_y_ && !(y > 0)) return;
    auto& cell = data_[series][x];
    cell.first += log_y_ ? std::log(y) : y;
    cell.second += 1;
  }
  std::vector<Series> Build() const {
    std::vector<Series> out;
    for (const auto& [name, pts] : data_) {
      Series s;
      s.name = name;
      for (const auto& [x, acc] : pts) {
        double m = acc.first / acc.second;
        s.points.emplace_back(x, log_y_ ? std::exp(m) : m);
      }
      out.push_back(std::move(s));
    }
    return out;
  }
  bool empty() const { return data_.empty(); }

 private:
  bool log_y_;
  std::map<std::string, std::map<double, std::pair<double, int>>> data_;
};

std::string SolverLabel(const CsvRecord& r, bool with_parties,
                        bool with_mode) {
  std::string s = Text(r, "algo");
  if (s == "cgd") s += "(" + Text(r, "iterations") + ")";
  if (with_mode && Text(r, "mode") != "secure") s += " " + Text(r, "mode");
  if (with_parties) s += " n=" + Text(r, "parties");
  return s;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') {
      out += "&lt;";
    } else if (c == '>') {
      out += "&gt;";
    } else if (c == '&') {
      out += "&amp;";
    } else {
      out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double Map(double v, double a, double b) const {
    double t = log ? (std::log10(v) - std::log10(lo)) /
                         (std::log10(hi) - std::log10(lo))
                   : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
  std::vector<double> Ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi));
           e += 1) {
        double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) t.push_back(v);
      }
      if (t.size() < 2) t = {lo, hi};
    } else {
      for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
    }
    return t;
  }
};

Axis MakeAxis(const std::vector<double>& vals, bool log) {
  Axis a;
  a.log = log;
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10;
  } else {
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

}  // namespace

std::vector<Panel> BuildPanels(const std::vector<CsvRecord>& rows) {
  std::vector<Panel> panels;
  std::set<int> precisions;
  std::set<std::string> parties, modes;
  for (const auto& r : rows) {
    if (!IsSolverRow(r)) continue;
    precisions.insert(static_cast<int>(Field(r, "f")));
    parties.insert(Text(r, "parties"));
    modes.insert(Text(r, "mode"));
  }
  const bool with_parties = parties.size() > 1;
  const bool with_mode = modes.size() > 1;
  for (int f : precisions) {
    const std::string tag = "f" + std::to_string(f);
    SeriesBuilder runtime(false), iters(true), dims(true);
    for (const auto& r : rows) {
      if (!IsSolverRow(r) || static_cast<int>(Field(r, "f")) != f) continue;
      const std::string label = SolverLabel(r, with_parties, with_mode);
      const double d = Field(r, "d");
      runtime.Add(label, d, Field(r, "online_seconds"));
      dims.Add(label, d, Field(r, "residual"));
      if (Text(r, "algo") == "cgd") {
        std::string s = "cond=" + Fmt(Field(r, "cond"));
        if (with_parties) s += " n=" + Text(r, "parties");
        iters.Add(s, Field(r, "iterations"), Field(r, "residual"));
      }
    }
    const std::string bits = " (" + std::to_string(f) + " fractional bits)";
    if (!runtime.empty()) {
      panels.push_back({"runtime_vs_dimension_" + tag,
                        "Online time vs dimension" + bits, "dimension d",
                        "online seconds", false, false, runtime.Build()});
    }
    if (!iters.empty()) {
      panels.push_back({"accuracy_vs_iterations_" + tag,
                        "CGD residual vs iterations" + bits, "iterations",
                        "relative residual", false, true, iters.Build()});
    }
    if (!dims.empty()) {
      panels.push_back({"accuracy_vs_dimension_" + tag,
                        "Residual vs dimension" + bits, "dimension d",
                        "relative residual", false, true, dims.Build()});
    }
  }

  // SGD: metric vs precision, one series per dataset and activation.
  for (const char* algo : {"sgd-logistic", "sgd-linear"}) {
    const bool cls = std::string(algo) == "sgd-logistic";
    std::set<int> fs;
    SeriesBuilder b(false);
    for (const auto& r : rows) {
      if (Text(r, "algo") != algo) continue;
      fs.insert(static_cast<int>(Field(r, "f")));
      std::string s = Text(r, "dataset");
      if (cls) s += " " + Text(r, "activation");
      if (Text(r, "mode") != "secure") s += " " + Text(r, "mode");
      b.Add(s, Field(r, "f"),
            cls ? 100.0 * Field(r, "accuracy") : Field(r, "rmse"));
    }
    if (fs.size() < 2) continue;
    panels.push_back({cls ? "accuracy_vs_precision" : "rmse_vs_precision",
                      cls ? "Test accuracy vs precision"
                          : "Test RMSE vs precision",
                      "fractional bits f", cls ? "accuracy (%)" : "RMSE",
                      false, false, b.Build()});
  }
  return panels;
}

std::string RenderSvg(const Panel& p) {
  const double W = 640, H = 420, L = 80, R = 190, T = 40, B = 60;
  std::vector<double> xs, ys;
  for (const auto& s : p.series) {
    for (const auto& [x, y] : s.points) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-size=\"14\">" << Escape(p.title) << "</text>\n";
  if (xs.empty()) {
    os << "</svg>\n";
    return os.str();
  }
  const bool log_x = p.log_x && *std::min_element(xs.begin(), xs.end()) > 0;
  const bool log_y = p.log_y && *std::min_element(ys.begin(), ys.end()) > 0;
  Axis ax = MakeAxis(xs, log_x), ay = MakeAxis(ys, log_y);
  const double x0 = L, x1 = W - R, y0 = H - B, y1 = T;
  os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0
     << "\" height=\"" << y0 - y1 << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.Ticks()) {
    double px = ax.Map(t, x0, x1);
    os << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px
       << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << px << "\" y=\"" << y0 + 18
       << "\" text-anchor=\"middle\">" << Fmt(t) << "</text>\n";
  }
  for (double t : ay.Ticks()) {
    double py = ay.Map(t, y0, y1);
    os << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x1
       << "\" y2=\"" << py << "\" stroke=\"#ddd\"/>"
       << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4
       << "\" text-anchor=\"end\">" << Fmt(t) << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\">" << Escape(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << (y0 + y1) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(p.y_label)
     << "</text>\n";
  for (std::size_t i = 0; i < p.series.size(); ++i) {
    const auto& s = p.series[i];
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(*kPalette))];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.points) {
      os << ax.Map(x, x0, x1) << "," << ay.Map(y, y0, y1) << " ";
    }
    os << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      os << "<circle cx=\"" << ax.Map(x, x0, x1) << "\" cy=\""
         << ay.Map(y, y0, y1) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = T + 10 + 18 * static_cast<double>(i);
    os << "<line x1=\"" << x1 + 12 << "\" y1=\"" << ly << "\" x2=\""
       << x1 + 32 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/><text x=\"" << x1 + 38 << "\" y=\""
       << ly + 4 << "\">" << Escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string PanelsToCsv(const std::vector<Panel>& panels) {
  std::ostringstream os;
  os << "panel,series,x,y\n";
  for (const auto& p : panels) {
    for (const auto& s : p.series) {
      for (const auto& [x, y] : s.points) {
        os << p.file << ",\"" << s.name << "\"," << Fmt(x) << "," << Fmt(y)
           << "\n";
      }
    }
  }
  return os.str();
}

std::string ActivationTable(const std::vector<CsvRecord>& rows) {
  // activation -> dataset -> (offline, online); repeated cells are averaged.
  std::map<std::string, std::map<std::string, std::pair<double, double>>> t;
  std::map<std::string, std::map<std::string, int>> counts;
  std::vector<std::string> datasets;
  for (const auto& r : rows) {
    if (Text(r, "algo") != "sgd-logistic" || Text(r, "mode") != "secure") {
      continue;
    }
    const std::string& act = Text(r, "activation");
    const std::string& ds = Text(r, "dataset");
    if (std::find(datasets.begin(), datasets.end(), ds) == datasets.end()) {
      datasets.push_back(ds);
    }
    auto& cell = t[act][ds];
    cell.first += Field(r, "offline_seconds");
    cell.second += Field(r, "online_seconds");
    counts[act][ds] += 1;
  }
  if (t.empty()) return "";
  // piecewise first, then Taylor degrees in increasing order
  std::vector<std::string> acts;
  for (const auto& [a, _] : t) acts.push_back(a);
  auto rank = [](const std::string& a) {
    if (a == "piecewise") return -1;
    if (a.rfind("taylor:", 0) == 0) return std::stoi(a.substr(7));
    return 1000;
  };
  std::sort(acts.begin(), acts.end(), [&](const auto& a, const auto& b) {
    return rank(a) != rank(b) ? rank(a) < rank(b) : a < b;
  });
  std::ostringstream os;
  os << "activation";
  for (const auto& ds : datasets) {
    os << ",\"" << ds << " offline_seconds\",\"" << ds << " online_seconds\"";
  }
  os << "\n";
  for (const auto& a : acts) {
    os << a;
    for (const auto& ds : datasets) {
      auto it = t[a].find(ds);
      if (it == t[a].end()) {
        os << ",,";
        continue;
      }
      const int c = counts[a][ds];
      os << "," << Fmt(it->second.first / c) << ","
         << Fmt(it->second.second / c);
    }
    os << "\n";
  }
  return os.str();
}

PlotSummary WritePlots(const std::vector<CsvRecord>& rows,
                       const std::string& dir) {
  PlotSummary out;
  auto panels = BuildPanels(rows);
  const std::string table = ActivationTable(rows);
  if (panels.empty() && table.empty()) return out;
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    const std::string path = dir + "/" + name;
    std::ofstream f(path);
    MPML_ENFORCE(f.good(), ConfigError, "cannot write " + path);
    f << text;
    out.files.push_back(path);
  };
  for (const auto& p : panels) write(p.file + ".svg", RenderSvg(p));
  out.panels = panels.size();
  if (!panels.empty()) write("plot_data.csv", PanelsToCsv(panels));
  if (!table.empty()) write("activation_table.csv", table);
  return out;
}

}  // namespace mpml::cli
