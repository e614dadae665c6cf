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

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mieflow {

using cplx = std::complex<double>;

inline constexpr double kLn2 = std::numbers::ln2;

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a well-defined answer
/// (closed gap, forced impossible outcome, singular fit).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SiteSet = std::vector<int>;

/// Disjoint site sets. `a`, `b`, `m` partition the system; `a0` and `b0`
/// (optional) are subregions of `a` and `b` used by partially traced
/// quantities, the remainder being traced out.
struct RegionSpec {
  SiteSet a;
  SiteSet b;
  SiteSet m;
  SiteSet a0;
  SiteSet b0;

  /// Checks disjointness, bounds and (if `num_sites` > 0) that a, b, m
  /// cover every site. Throws InvalidArgument.
  void validate(int num_sites, bool require_cover = true) const;

  [[nodiscard]] SiteSet ab() const;
};

/// Sorted copy; throws on duplicates or indices outside [0, n).
SiteSet normalized_sites(std::span<const int> sites, int n, const char* what);

/// x ln x with the 0 ln 0 = 0 convention and clipping to [0, 1].
double xlogx_clipped(double x);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic per-trajectory stream: depends only on (seed, index).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
};

/// Pairwise (cascade) summation; result does not depend on thread layout.
double pairwise_sum(std::span<const double> values);

}  // namespace mieflow
