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

// Monte Carlo averages over Born-sampled measurement trajectories.
//
// Trajectory t draws from RngStream(seed, t) and writes slot t of the sample
// array, so results do not depend on the thread count.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mieflow/common.hpp"
#include "mieflow/gaussian.hpp"

namespace mieflow::estimate {

struct EstimatorResult {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(n).
  double stderr_mean = 0.0;
  double jackknife_stderr = 0.0;
  std::int64_t n_samples = 0;
  std::vector<double> samples;
};

/// Pairwise-summed mean, naive and jackknife errors.
EstimatorResult summarize(std::vector<double> samples, bool keep_samples = false);

struct SeriesPoint {
  double abscissa = 0.0;
  EstimatorResult value;
};

struct SeriesResult {
  std::vector<SeriesPoint> points;

  /// Inserts keeping abscissas sorted; throws on duplicates.
  void add(double abscissa, EstimatorResult value);
  void validate() const;
};

struct SamplingOptions {
  std::int64_t n_samples = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool keep_samples = false;
};

/// MIEFLOW_THREADS if set, else the hardware concurrency (at least 1).
int default_threads();

/// Calls body(t) for t in [0, n) on `threads` workers. The first exception
/// thrown by any worker is rethrown.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& body);

/// Born average of S(A) after measuring every mode of M.
EstimatorResult monte_carlo_mie(const gaussian::GaussianState& state, const RegionSpec& regions,
                                const SamplingOptions& options);

/// 2 MIE - I(A,B) of the unmeasured state, error 2 * MIE error.
EstimatorResult mii(const gaussian::GaussianState& state, const RegionSpec& regions,
                    const EstimatorResult& mie);

/// Born average of I(A0, B0) after measuring M, minus I(A0, B0) before;
/// (A \ A0) and (B \ B0) are traced out.
EstimatorResult traced_mii(const gaussian::GaussianState& state, const RegionSpec& regions,
                           const SamplingOptions& options);

struct ScaledMie {
  /// 2 MIE_half - MIE_full
  EstimatorResult value;
  EstimatorResult full;
  EstimatorResult half;
};

/// evaluate(0) is the full geometry, evaluate(1) the one halved along the
/// direction of interest.
ScaledMie scaled_mie_from(const std::function<EstimatorResult(int halvings)>& evaluate);

struct Instance {
  gaussian::GaussianState state;
  RegionSpec regions;
};

/// factory(halvings) builds the state and regions; it should throw
/// InvalidArgument when a size cannot be halved.
ScaledMie scaled_mie(const std::function<Instance(int halvings)>& factory,
                     const SamplingOptions& options);

}  // namespace mieflow::estimate
