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

// Binary MERA networks in the infinite bond dimension limit: entropies are
// log D times minimal edge cuts between boundary domains.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mieflow/common.hpp"

namespace mieflow::mera {

/// Nodes 0..length-1 are the boundary legs; the rest are tensors. Every edge
/// has unit weight.
struct MeraGraph {
  int length = 0;
  int depth = 0;
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Periodic binary MERA on L = 2^k legs (k >= 2): each layer applies
/// disentanglers on (2i+1, 2i+2) and then isometries on (2i, 2i+1).
MeraGraph build_mera(int length);

enum class Leg : char { free, up, down };

/// Minimum number of edges separating up legs from down legs; free legs join
/// whichever side is cheaper. Zero if either side is empty.
int min_cut(const MeraGraph& graph, std::span<const Leg> legs);
/// Exhaustive enumeration over tensor and free-leg assignments (small graphs).
int min_cut_brute_force(const MeraGraph& graph, std::span<const Leg> legs);

/// Region down, everything else up.
int region_cut(const MeraGraph& graph, std::span<const int> region);

struct Interval {
  int first = 0;
  int last = 0;
};

struct LargeDMutualInfo {
  double f_a = 0.0;
  double f_b = 0.0;
  /// Connected configuration: walls over [x1, x4] and over the gap (x2, x3).
  double f_connected = 0.0;
  /// F_A + F_B + log(exp(-F_A - F_B) + exp(-F_connected))
  double mutual_information = 0.0;
};

/// Free energies in nats for bond dimension D = exp(log_d); requires
/// a.last < b.first and b.last < L.
LargeDMutualInfo mutual_info_large_d(const MeraGraph& graph, Interval a, Interval b, double log_d);

/// A down, B up, the rest free; returns log_d times the cut.
double mie_large_d(const MeraGraph& graph, std::span<const int> a, std::span<const int> b,
                   double log_d);

}  // namespace mieflow::mera
