// Copyright 2026 The mieflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// `mieflow run`: configuration -> validated plan -> CSV, manifest, SVG.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "mieflow/cli/config.hpp"
#include "mieflow/cli/output.hpp"

namespace mieflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Command-line overrides; unset fields fall back to MIEFLOW_THREADS (threads
/// only), then the config, then defaults.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  bool svg = false;
};

/// A fully validated experiment. execute() performs the computation without
/// touching the file system.
struct Plan {
  std::string experiment;
  std::string name;
  std::string out_dir;
  bool svg = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::int64_t n_samples = 1;
  KeyValues settings;
  std::function<RunResult()> execute;
};

/// Reads and validates every key; throws ConfigError.
Plan plan_experiment(Config& config, const RunOptions& options);

/// Seed for sub-stream `index` of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Loads, plans, executes and writes outputs. Returns an exit status and
/// reports diagnostics on `err`.
int run_command(const std::string& config_path, const RunOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace mieflow::cli
