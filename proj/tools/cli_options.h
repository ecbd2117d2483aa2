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

// Experiment options as flat key/value pairs, shared by command-line flags
// and grid files.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "mpml/errors.h"
#include "mpml/experiment.h"

namespace mpml::cli {

using Options = std::map<std::string, std::string>;

// Keys accepted by ConfigFromOptions (flag names without "--").
const std::vector<std::string>& ValueKeys();
const std::vector<std::string>& FlagKeys();

// Throws ConfigError for unknown keys or malformed values.
ExperimentConfig ConfigFromOptions(const Options& options);

// Grid file: {"base": {key: value}, "axes": {key: [values]}}. Cells are the
// cross product of the axes, the first axis varying slowest.
std::vector<Options> ExpandGrid(const std::string& json_text);

// Process exit code for an error kind.
int ExitCodeFor(ErrorKind kind);

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConnection = 3;
inline constexpr int kExitMacAbort = 4;
inline constexpr int kExitExhausted = 5;

// Appends rows to a results file, writing the header when the file is new
// or empty. ConfigError when an existing header differs.
void AppendResults(const std::string& path,
                   const std::vector<std::string>& rows);

// Parties of one local run must agree on outputs, metrics and transcripts.
void CheckPartiesAgree(const std::vector<ExperimentResult>& results);

}  // namespace mpml::cli
