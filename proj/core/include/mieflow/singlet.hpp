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

// Random-singlet states from strong-disorder decimation, and the exact
// effect of Z and Bell measurements on singlet products.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mieflow/common.hpp"

namespace mieflow::singlet {

enum class Boundary { open, periodic };

/// partner[i] is the site sharing a singlet with i, or -1 for sites that
/// carry no singlet (measured sites after rewiring).
struct SingletConfig {
  int length = 0;
  std::vector<int> partner;

  /// Pairs (i, j) with i < j, sorted by i.
  [[nodiscard]] std::vector<std::pair<int, int>> pairs() const;
  /// Throws unless every site in `sites` (all sites if empty) is paired
  /// with another site of the same set.
  void validate(std::span<const int> sites = {}) const;
};

SingletConfig from_pairs(int length, std::span<const std::pair<int, int>> pairs);

/// Ma-Dasgupta decimation: the strongest bond (l, r) forms a singlet and its
/// neighbours are joined by J_L J_R / (2 J_M). couplings[i] joins sites i
/// and i + 1 (mod L when periodic); open chains have L - 1 couplings.
/// Ties go to the lower site index.
SingletConfig sdrg_decimate(std::span<const double> couplings, Boundary boundary);
/// Couplings i.i.d. uniform on (0, 1].
SingletConfig sdrg_sample(int length, RngStream& rng, Boundary boundary = Boundary::periodic);

/// Bell measurement pairs covering M.
using BellPairing = std::vector<std::pair<int, int>>;

/// Splits M into maximal runs of consecutive sites (cyclic when periodic)
/// and pairs each run left to right. Throws if a run has odd length.
BellPairing nearest_neighbor_pairing(int length, std::span<const int> measured, Boundary boundary);

/// Singlet products after Bell measurements: every chain of singlet and
/// Bell links joining two unmeasured sites becomes one singlet. Closed
/// loops inside M are dropped.
SingletConfig bell_rewire(const SingletConfig& config, const BellPairing& pairing);

/// Number of singlets with one end in `a` and the other in `b`.
int count_spanning(const SingletConfig& config, std::span<const int> a, std::span<const int> b);

std::vector<int> pair_distances(const SingletConfig& config, Boundary boundary);

struct MieMii {
  double mie = 0.0;
  double mii = 0.0;
};

/// mie = n_AB ln 2, mii = 0.
MieMii mie_mii_zbasis(const SingletConfig& config, const RegionSpec& regions);
/// mie = n_AB(after) ln 2, mii = 2 mie - 2 n_AB(before) ln 2.
MieMii mie_mii_bell(const SingletConfig& config, const RegionSpec& regions,
                    const BellPairing& pairing);

}  // namespace mieflow::singlet
