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

#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "mieflow/cli/experiments.hpp"
#include "mieflow/cli/verify.hpp"

int main(int argc, char** argv) {
  using namespace mieflow::cli;
  CLI::App app{"Measurement-induced entanglement toolkit"};
  app.set_version_flag("--version", MIEFLOW_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  RunOptions run;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
  run_cmd->add_option("config", config_path, "Experiment config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the config seed");
  auto* threads_opt =
      run_cmd->add_option("--threads", threads, "Worker threads (overrides MIEFLOW_THREADS)")->check(CLI::PositiveNumber);
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run_cmd->add_flag("--svg", run.svg, "Also write SVG plots");

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  int verify_threads = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check engines against brute-force references");
  verify_cmd->add_option("suite", suite, "oracle, topo, rs, mera or all")
      ->check(CLI::IsMember({"oracle", "topo", "rs", "mera", "all"}));
  verify_cmd->add_option("--seed", verify_seed, "Random seed");
  verify_cmd->add_option("--threads", verify_threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (*run_cmd) {
      if (*seed_opt) run.seed = seed;
      if (*threads_opt) run.threads = threads;
      if (*out_opt) run.out_dir = out_dir;
      return run_command(config_path, run, std::cout, std::cerr);
    }
    const int t = verify_threads > 0 ? verify_threads : mieflow::estimate::default_threads();
    return verify_command(suite, verify_seed, t, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
