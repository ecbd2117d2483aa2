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

// Static SVG plots and summary tables from a results file.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mpml/experiment.h"

namespace mpml::cli {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // sorted by x
};

struct Panel {
  std::string file;  // without extension
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

// Solver rows, per precision: runtime vs dimension, CGD residual vs
// iterations by condition number, residual vs dimension. SGD rows: accuracy
// or RMSE vs precision, per dataset, when several precisions are present.
std::vector<Panel> BuildPanels(const std::vector<CsvRecord>& rows);

std::string RenderSvg(const Panel& panel);

// Tidy "panel,series,x,y" table of every plotted point.
std::string PanelsToCsv(const std::vector<Panel>& panels);

// Logistic-SGD timings: one row per activation, offline and online seconds
// per dataset. Empty when there are no such rows.
std::string ActivationTable(const std::vector<CsvRecord>& rows);

struct PlotSummary {
  std::vector<std::string> files;  // everything written
  std::size_t panels = 0;
};

// Writes <dir>/<panel>.svg, <dir>/plot_data.csv and, when applicable,
// <dir>/activation_table.csv.
PlotSummary WritePlots(const std::vector<CsvRecord>& rows,
                       const std::string& dir);

}  // namespace mpml::cli
