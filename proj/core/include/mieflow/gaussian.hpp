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

// Slater determinants as correlation matrices C_ij = <c_i^dag c_j>, with
// projective occupation-number measurements.
//
// Measuring orbital a with outcome n updates the unmeasured block as
//
//   C'_ij = C_ij - C_ia C_aj / (C_aa - 1 + n),   i, j != a,
//
// and pins row and column a to n e_a. Outcome 1 occurs with probability
// C_aa. A sequence of such updates is a pivoted Schur complement, which
// TrajectorySampler evaluates panel by panel.

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mieflow/common.hpp"

namespace mieflow::gaussian {

/// Deterministic-outcome guard on C_aa.
inline constexpr double kDeterministicGuard = 1e-12;
/// A forced outcome must have at least this probability.
inline constexpr double kForcedFloor = 1e-14;

class GaussianState {
 public:
  /// Validates Hermiticity (1e-10) and the diagonal range.
  explicit GaussianState(Eigen::MatrixXcd corr);

  /// C = conj(V) V^T for occupied orbitals stored as the columns of V.
  static GaussianState from_orbitals(const Eigen::MatrixXcd& orbitals);
  static GaussianState from_occupations(std::span<const int> occupations);
  /// Wraps a matrix without validation.
  static GaussianState adopt(Eigen::MatrixXcd corr) { return GaussianState(std::move(corr), Unchecked{}); }

  [[nodiscard]] int num_modes() const { return static_cast<int>(corr_.rows()); }
  [[nodiscard]] const Eigen::MatrixXcd& corr() const { return corr_; }
  [[nodiscard]] double particle_number() const { return corr_.trace().real(); }
  /// max |(C^2 - C)_ij|
  [[nodiscard]] double projector_error() const;
  [[nodiscard]] double hermiticity_error() const;
  /// True when every entry has zero imaginary part.
  [[nodiscard]] bool is_real() const;

 private:
  struct Unchecked {};
  GaussianState(Eigen::MatrixXcd corr, Unchecked) : corr_(std::move(corr)) {}

  Eigen::MatrixXcd corr_;
};

struct TrajectoryRecord {
  std::vector<int> sites;
  std::vector<int> outcomes;
  double log_probability = 0.0;
};

struct OrbitalMeasurement {
  int outcome = 0;
  /// Born probability of the returned outcome.
  double probability = 1.0;
  GaussianState state;
};

/// Single-orbital measurement. `uniform` in [0, 1) selects outcome 1 when it
/// falls below C_aa. A forced outcome of (near) zero probability throws
/// NumericalError.
OrbitalMeasurement measure_orbital(const GaussianState& state, int site,
                                   std::optional<int> forced, double uniform);

struct RegionMeasurement {
  TrajectoryRecord record;
  GaussianState state;
};

/// Measures `sites` in ascending order, drawing from `rng`.
RegionMeasurement measure_region(const GaussianState& state, std::span<const int> sites,
                                 RngStream& rng);
/// Same with every outcome forced (outcomes aligned with ascending sites).
RegionMeasurement measure_region_forced(const GaussianState& state, std::span<const int> sites,
                                        std::span<const int> outcomes);

double entropy(const GaussianState& state, std::span<const int> region);
double mutual_information(const GaussianState& state, std::span<const int> a,
                          std::span<const int> b);

/// Entropy of a (sub)correlation matrix, in nats.
double entropy_of_correlation(const Eigen::MatrixXcd& corr);

/// Samples post-measurement correlation matrices restricted to a kept set.
/// The permuted input is stored once; each sample copies it and runs a
/// blocked elimination over the measured modes. Real inputs use a real
/// kernel. Thread-safe for concurrent sample() calls.
class TrajectorySampler {
 public:
  TrajectorySampler(const GaussianState& state, std::span<const int> measured,
                    std::span<const int> kept);
  ~TrajectorySampler();
  TrajectorySampler(TrajectorySampler&&) noexcept;
  TrajectorySampler& operator=(TrajectorySampler&&) noexcept;

  struct Sample {
    std::vector<int> outcomes;
    double log_probability = 0.0;
    /// Post-measurement correlation on the kept modes, in `kept` order.
    Eigen::MatrixXcd kept_corr;
  };

  [[nodiscard]] Sample sample(RngStream& rng) const;
  [[nodiscard]] Sample sample_forced(std::span<const int> outcomes) const;

  [[nodiscard]] const std::vector<int>& measured() const { return measured_; }
  [[nodiscard]] const std::vector<int>& kept() const { return kept_; }

 private:
  struct Impl;
  std::vector<int> measured_;
  std::vector<int> kept_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mieflow::gaussian
