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

// Dense state-vector reference implementation. Everything here is brute
// force and meant for small systems; the other modules are checked against
// it.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mieflow/common.hpp"

namespace mieflow::oracle {

inline constexpr int kMaxSites = 14;
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 14;

/// Pure state on a register of qudits. Site 0 is the most significant
/// digit of the amplitude index.
class StateVector {
 public:
  StateVector(std::vector<int> local_dims, Eigen::VectorXcd amplitudes);

  static StateVector qubits(Eigen::VectorXcd amplitudes);
  /// Tensor product of single-site vectors (normalized on construction).
  static StateVector product(const std::vector<Eigen::VectorXcd>& site_states);
  /// Computational basis state |digits>.
  static StateVector basis_state(std::vector<int> local_dims, std::span<const int> digits);

  [[nodiscard]] int num_sites() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] const std::vector<int>& local_dims() const { return dims_; }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amps_; }
  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }

  /// Amplitude matrix with rows indexed by `rows` (first listed site most
  /// significant) and columns by the remaining sites in ascending order.
  [[nodiscard]] Eigen::MatrixXcd bipartition(std::span<const int> rows) const;

 private:
  std::vector<int> dims_;
  Eigen::VectorXcd amps_;
};

/// Orthonormal measurement frame on one or two sites; column k of `basis`
/// is the state for outcome k.
struct Frame {
  std::vector<int> sites;
  Eigen::MatrixXcd basis;
};

using ProductBasis = std::vector<Frame>;

Frame z_frame(int site, int dim = 2);
Frame x_frame(int site);
/// Discrete Fourier frame on a qudit: outcome k is (1/sqrt d) sum_j w^{jk}|j>.
Frame fourier_frame(int site, int dim);
/// Two-qubit Bell frame: 0 singlet (|01>-|10>)/sqrt2, 1 (|01>+|10>)/sqrt2,
/// 2 (|00>-|11>)/sqrt2, 3 (|00>+|11>)/sqrt2.
Frame bell_frame(int site_i, int site_j);
/// Frame from a single-site unitary (columns are basis vectors).
Frame unitary_frame(int site, Eigen::MatrixXcd unitary);

struct GroundState {
  StateVector state;
  double energy;
};

/// Lowest eigenvector of a Hermitian matrix. The phase is fixed by making
/// the largest-magnitude component (smallest index on ties) real positive.
GroundState ground_state(const Eigen::MatrixXcd& hamiltonian, std::vector<int> local_dims);
GroundState ground_state(const Eigen::MatrixXcd& hamiltonian);

struct Projection {
  double probability = 0.0;
  /// Empty when the outcome has zero probability.
  std::optional<StateVector> state;
};

Projection project(const StateVector& state, const Frame& frame, int outcome);
Projection project_site(const StateVector& state, int site, const Frame& frame, int outcome);

/// Von Neumann entropy of the reduced state on `region`, in nats.
double entropy(const StateVector& state, std::span<const int> region);
double mutual_information(const StateVector& state, std::span<const int> a,
                          std::span<const int> b);

/// Born probabilities of every joint outcome of `basis`, in lexicographic
/// order (first frame most significant).
std::vector<double> outcome_distribution(const StateVector& state, const ProductBasis& basis);

struct MieMii {
  double mie = 0.0;
  double mii = 0.0;
  /// Born average of I(A,B) after measurement.
  double post_mutual_info = 0.0;
  double pre_mutual_info = 0.0;
};

/// Exact enumeration over all outcomes of the frames covering M.
MieMii mie_mii_exact(const StateVector& state, const RegionSpec& regions,
                     const ProductBasis& basis);

struct LocalOperator {
  std::vector<int> sites;
  Eigen::MatrixXcd matrix;
};

Eigen::VectorXcd apply(const StateVector& state, const LocalOperator& op);

struct StrangeCorrelator {
  cplx value;
  cplx connected;
};

/// <ref|O_A O_B|psi>/<ref|psi> and its connected part. Returns nullopt when
/// |<ref|psi>| < 1e-12.
std::optional<StrangeCorrelator> strange_correlator(const StateVector& state,
                                                    const StateVector& reference,
                                                    const LocalOperator& op_a,
                                                    const LocalOperator& op_b);

struct StrangeBoundReport {
  double mie = 0.0;
  /// Weighted squared strange-correlator sum on the right-hand side.
  double bound = 0.0;
  /// Product-state normalization |<m_A|O_A|| |<m_B|O_B||.
  double norm_a = 0.0;
  double norm_b = 0.0;
  bool degenerate = false;
  [[nodiscard]] bool holds(double tol = 1e-12) const { return degenerate || mie + tol >= bound; }
};

/// Lower bound of MIE(A) by strange correlators. With Y = |m_a m_b><m_a m_b| O_A O_B,
/// Pinsker and Hoelder give
///   MIE(A) >= 1/4 sum_c p_c |<Y>_c - <m_a|O_A rho_A|m_a><m_b|O_B rho_B|m_b>|^2 / ||Y||^2
/// where p_c <Y>_c = p_{a b c} SC / p_c. The subtracted product term vanishes
/// for charged operators, leaving c0 sum_c p^2_{abc}/p_c |SC|^2 with
/// c0 = 1 / (4 ||O_A^dag m_a||^2 ||O_B^dag m_b||^2).
/// `ref_a`, `ref_b` are vectors over the sorted sites of A and B.
StrangeBoundReport check_sc_bound(const StateVector& state, const RegionSpec& regions,
                                  const ProductBasis& basis, const Eigen::VectorXcd& ref_a,
                                  const Eigen::VectorXcd& ref_b, const Eigen::MatrixXcd& op_a,
                                  const Eigen::MatrixXcd& op_b);

// Free-fermion helpers (Jordan-Wigner, |1> = occupied, site 0 leftmost).

/// Many-body matrix of sum_ij h_ij c_i^dag c_j.
Eigen::MatrixXcd fermion_hamiltonian(const Eigen::MatrixXcd& single_particle);
/// C_ij = <c_i^dag c_j>.
Eigen::MatrixXcd correlation_matrix(const StateVector& state);

/// Product of singlets (|01>-|10>)/sqrt2 on the given pairs (i < j).
StateVector singlet_product(int num_sites, const std::vector<std::pair<int, int>>& pairs);

}  // namespace mieflow::oracle
