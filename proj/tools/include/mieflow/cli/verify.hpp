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

// Cross-checks of the fast engines against brute-force references.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mieflow/estimator.hpp"
#include "mieflow/gaussian.hpp"
#include "mieflow/oracle.hpp"

namespace mieflow::cli {

/// A random number-conserving ground state in both representations.
struct GaussianInstance {
  oracle::StateVector dense;
  gaussian::GaussianState state;
  RegionSpec regions;
  int particles = 0;
};

/// n in [min_modes, max_modes] modes; A in [0, s), B in [s, n), M the rest,
/// all nonempty. The single-particle gap at the Fermi level is >= 1e-3.
GaussianInstance random_gaussian_instance(RngStream& rng, int min_modes, int max_modes);

struct OracleComparison {
  double exact = 0.0;
  estimate::EstimatorResult mc;
  /// Largest |p_sampler - p_exact| over every occupation record of M.
  double max_probability_error = 0.0;

  [[nodiscard]] bool agrees(double sigmas) const;
};

OracleComparison compare_with_oracle(const GaussianInstance& instance,
                                     const estimate::SamplingOptions& options);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suites: oracle, topo, rs, mera, all. Throws InvalidArgument otherwise.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed, int threads);

/// Prints a pass/fail table; 0 if every check passed, 1 otherwise.
int verify_command(const std::string& suite, std::uint64_t seed, int threads, std::ostream& out,
                   std::ostream& err);

}  // namespace mieflow::cli
