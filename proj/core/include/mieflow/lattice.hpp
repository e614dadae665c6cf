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

// Free-fermion ground states on chains and cylinders, region layouts and the
// cross ratio.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mieflow/common.hpp"
#include "mieflow/gaussian.hpp"

namespace mieflow::lattice {

/// Term amplitude * c^dag_{from}(R) c_{to}(R + (dx, dy)) + h.c.
struct Hopping {
  int from = 0;
  int to = 0;
  int dx = 0;
  int dy = 0;
  cplx amplitude;
};

/// Translation-invariant quadratic model with `orbitals` modes per cell.
struct TightBinding {
  int orbitals = 1;
  std::vector<Hopping> hoppings;
  std::vector<double> onsite;
};

/// Lx x Ly cells, periodic in x. Mode index is (y * lx + x) * orbitals + orbital.
/// Hoppings that wind once around x pick up exp(i x_twist); pi gives
/// antiperiodic boundary conditions.
struct CylinderGeometry {
  int lx = 4;
  int ly = 4;
  bool periodic_y = false;
  double x_twist = 0.0;

  void validate() const;
};

/// Two-orbital checkerboard model: nearest-neighbour t1 e^{-+i pi/4}, second
/// neighbour +-t2, staggered potential +V / -V on the two sublattices. The
/// lower band has Chern number +1 for |V| < 4 t2.
TightBinding chern_model(double t1, double t2, double v);
/// Nearest-neighbour hopping -t on the square lattice.
TightBinding square_model(double t = 1.0);

Eigen::MatrixXcd real_space_hamiltonian(const TightBinding& model, const CylinderGeometry& geom);
Eigen::MatrixXcd bloch_hamiltonian(const TightBinding& model, double kx, double ky);

struct FilledState {
  gaussian::GaussianState state;
  /// E_N - E_{N-1} across the Fermi level.
  double gap = 0.0;
  /// Levels within 1e-9 of the highest filled one (including it).
  int shell_degeneracy = 1;
  double energy = 0.0;
};

/// Fills the `particles` lowest eigenvectors of h in eigensolver order.
FilledState fill_lowest(const Eigen::MatrixXcd& h, int particles);

/// Ring of L sites with hopping energies -2 cos k, k = 2 pi m / L. The
/// floor(L n_f) lowest modes are filled; ties go to smaller |k|, then +k.
/// C_ij = (1/L) sum_filled e^{i k (i - j)}.
gaussian::GaussianState xx_chain_state(int length, double filling);
/// Closed form (1/L)(1 + e^{inx} + 2 sin((n-1)x/2) cos(nx/2) / sin(x/2)),
/// x = 2 pi (i - j) / L, n = L n_f / 2.
Eigen::MatrixXcd xx_chain_closed_form(int length, double filling);
/// n_f = arccos(mu) / pi for |mu| < 1.
double filling_from_chemical_potential(double mu);

/// Half-filled lower band; throws NumericalError if the gap is below 1e-8.
FilledState chern_state(const CylinderGeometry& geom, double t1, double t2, double v);
/// Half-filled square-lattice metal. Degenerate Fermi shells are filled in
/// eigensolver order and reported through shell_degeneracy.
FilledState metal_state(const CylinderGeometry& geom);

/// Lower-band Chern number from plaquette Berry fluxes on a k-grid.
int chern_number(double t1, double t2, double v, int grid);

struct CrossRatio {
  double eta = 0.0;
  /// 1/eta = 1/eta_tilde + 1
  double eta_tilde = 0.0;
};

/// Points ordered x1 < x2 < x3 < x4. With `chord`,
/// x_ij = (L/pi) sin(pi |x_j - x_i| / L).
CrossRatio cross_ratio(double x1, double x2, double x3, double x4, double length, bool chord);

/// Cross ratio of inclusive site intervals A = [a_first, a_last],
/// B = [b_first, b_last], using interval edges as the four points.
CrossRatio interval_cross_ratio(int length, int a_first, int a_last, int b_first, int b_last,
                                bool chord);

/// A = [x1, x2], B = [x3, x4] inclusive on a chain of `length`; M the rest.
RegionSpec interval_regions(int length, int x1, int x2, int x3, int x4);

/// Two rings of `width` cell rows, `r` rows apart, centred along y.
RegionSpec ring_regions(const CylinderGeometry& geom, int orbitals, int width, int r);

}  // namespace mieflow::lattice
