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

// Prime-qudit stabilizer states, and Z_p quantum doubles on the torus.
//
// Operators are tau^r X^x Z^z with tau = exp(i pi / p), r mod 2p, and
// X|j> = |j+1>, Z|j> = w^j |j>, w = tau^2. In this ordering
//
//   (tau^r1 X^x1 Z^z1)(tau^r2 X^x2 Z^z2) = tau^(r1 + r2 + 2 z1.x2) X^(x1+x2) Z^(z1+z2).

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "mieflow/common.hpp"

namespace mieflow::stab {

struct Pauli {
  std::vector<int> x;
  std::vector<int> z;
  /// Exponent of tau, modulo 2p.
  int phase = 0;

  [[nodiscard]] int size() const { return static_cast<int>(x.size()); }
  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] std::vector<int> support() const;

  static Pauli identity(int n);
  static Pauli single_x(int n, int site, int power = 1);
  static Pauli single_z(int n, int site, int power = 1);
};

bool is_prime(int p);

/// Product a * b with all exponents reduced modulo p (phase modulo 2p).
Pauli multiply(const Pauli& a, const Pauli& b, int p);
Pauli power(const Pauli& a, int k, int p);
/// z_a . x_b - x_a . z_b mod p; a b = w^s b a.
int symplectic(const Pauli& a, const Pauli& b, int p);

enum class Basis { x, z };

class QuditStabilizerState {
 public:
  /// |0...0>.
  QuditStabilizerState(int p, int n);

  /// Checks commutation, independence and that there are n generators.
  static QuditStabilizerState from_generators(int p, int n, std::vector<Pauli> generators);

  [[nodiscard]] int prime() const { return p_; }
  [[nodiscard]] int num_qudits() const { return n_; }
  [[nodiscard]] const std::vector<Pauli>& generators() const { return gens_; }

  struct Outcome {
    /// Eigenvalue exponent k: op |post> = w^k |post>.
    int value = 0;
    bool random = false;
  };

  /// Projective measurement of an operator with op^p = I. Random outcomes
  /// are uniform; `forced` picks one instead.
  Outcome measure(const Pauli& op, RngStream& rng, std::optional<int> forced = std::nullopt);
  Outcome measure_site(int site, Basis basis, RngStream& rng);

  /// w-exponent of the eigenvalue if the state is an eigenstate of op.
  [[nodiscard]] std::optional<int> eigenvalue(const Pauli& op) const;

  /// (rank of generators restricted to region - |region|) ln p.
  [[nodiscard]] double entropy(std::span<const int> region) const;
  [[nodiscard]] double mutual_information(std::span<const int> a, std::span<const int> b) const;

  [[nodiscard]] bool generators_commute() const;

  /// Dense amplitudes, site 0 most significant; p^n must not exceed 2^14.
  [[nodiscard]] Eigen::VectorXcd to_amplitudes() const;

 private:
  QuditStabilizerState(int p, int n, std::vector<Pauli> gens) : p_(p), n_(n), gens_(std::move(gens)) {}

  int p_;
  int n_;
  std::vector<Pauli> gens_;
};

/// Rank over GF(p) of the given rows.
int rank_mod_p(std::vector<std::vector<int>> rows, int p);
int inverse_mod(int a, int p);

// Quantum double D(Z_p) on an l1 x l2 torus. Link h(x, y) joins vertex (x, y)
// to (x+1, y); link v(x, y) joins (x, y) to (x, y+1).

struct TorusLattice {
  int l1 = 4;
  int l2 = 4;

  void validate() const;
  [[nodiscard]] int num_qudits() const { return 2 * l1 * l2; }
  [[nodiscard]] int h(int x, int y) const;
  [[nodiscard]] int v(int x, int y) const;
};

/// X on outgoing links, X^-1 on incoming links of vertex (x, y).
Pauli star(const TorusLattice& lat, int x, int y, int p);
/// Z circulation around face (x, y).
Pauli plaquette(const TorusLattice& lat, int x, int y, int p);

/// Loop operators along l1 (x direction) at row y0 or along l2 at column x0.
/// e-type loops are Z strings, m-type loops are X strings on the dual lattice.
Pauli loop_e(const TorusLattice& lat, int direction, int offset, int p);
Pauli loop_m(const TorusLattice& lat, int direction, int offset, int p);

struct GroundStateLabel {
  enum class Kind { string_net, mes };
  Kind kind = Kind::string_net;
  /// string_net: (c1, c2) with loop_m(2) = w^c1, loop_m(1) = w^c2.
  /// mes: (g, chi) with loop_e(1) = w^g, loop_m(1) = w^chi.
  int first = 0;
  int second = 0;

  static GroundStateLabel string_net(int c1, int c2) { return {Kind::string_net, c1, c2}; }
  static GroundStateLabel mes(int g, int chi) { return {Kind::mes, g, chi}; }
};

QuditStabilizerState toric_ground(const TorusLattice& lat, int p, const GroundStateLabel& label);

/// Link-row key: h(x, y) -> 2y, v(x, y) -> 2y + 1.
int link_row(const TorusLattice& lat, int qudit);

/// Cyclic window of link rows [first, first + count) modulo 2 l2.
struct RowWindow {
  int first = 0;
  int count = 1;
};

/// Window covering whole cell rows [first, first + count): the h and v link
/// rows of each.
inline RowWindow cell_rows(int first, int count) { return {2 * first, 2 * count}; }

/// M = union of two windows; A and B are the two cylinders left between
/// them (A follows the first window).
RegionSpec annulus_regions(const TorusLattice& lat, RowWindow m1, RowWindow m2);

/// MIE after measuring M site by site in `basis`; the post-measurement
/// entropy of A for one trajectory.
struct TopologicalMie {
  double entropy_a = 0.0;
  double entropy_b = 0.0;
};
TopologicalMie mie_trajectory(QuditStabilizerState state, const RegionSpec& regions, Basis basis,
                              RngStream& rng);

/// -sum |a_g|^2 ln |a_g|^2 for the expansion of a label in minimally
/// entangled states along l1.
double mes_decomposition_entropy(int p, const GroundStateLabel& label);

}  // namespace mieflow::stab
