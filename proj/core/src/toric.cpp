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

#include <cmath>
#include <complex>
#include <numbers>

#include "mieflow/stabilizer.hpp"

namespace mieflow::stab {

namespace {

inline int wrap(int a, int n) { return ((a % n) + n) % n; }

void add_x(Pauli& g, int q, int e, int p) { g.x[q] = wrap(g.x[q] + e, p); }
void add_z(Pauli& g, int q, int e, int p) { g.z[q] = wrap(g.z[q] + e, p); }

}  // namespace

void TorusLattice::validate() const {
  if (l1 < 2 || l2 < 2) throw InvalidArgument("torus dimensions must be at least 2");
}

int TorusLattice::h(int x, int y) const { return 2 * (wrap(y, l2) * l1 + wrap(x, l1)); }
int TorusLattice::v(int x, int y) const { return h(x, y) + 1; }

Pauli star(const TorusLattice& lat, int x, int y, int p) {
  Pauli g = Pauli::identity(lat.num_qudits());
  add_x(g, lat.h(x, y), 1, p);
  add_x(g, lat.v(x, y), 1, p);
  add_x(g, lat.h(x - 1, y), -1, p);
  add_x(g, lat.v(x, y - 1), -1, p);
  return g;
}

Pauli plaquette(const TorusLattice& lat, int x, int y, int p) {
  Pauli g = Pauli::identity(lat.num_qudits());
  add_z(g, lat.h(x, y), 1, p);
  add_z(g, lat.v(x + 1, y), 1, p);
  add_z(g, lat.h(x, y + 1), -1, p);
  add_z(g, lat.v(x, y), -1, p);
  return g;
}

Pauli loop_e(const TorusLattice& lat, int direction, int offset, int p) {
  Pauli g = Pauli::identity(lat.num_qudits());
  if (direction == 1) {
    for (int x = 0; x < lat.l1; ++x) add_z(g, lat.h(x, offset), 1, p);
  } else if (direction == 2) {
    for (int y = 0; y < lat.l2; ++y) add_z(g, lat.v(offset, y), 1, p);
  } else {
    throw InvalidArgument("loop direction must be 1 or 2");
  }
  return g;
}

Pauli loop_m(const TorusLattice& lat, int direction, int offset, int p) {
  Pauli g = Pauli::identity(lat.num_qudits());
  if (direction == 1) {
    for (int x = 0; x < lat.l1; ++x) add_x(g, lat.v(x, offset), 1, p);
  } else if (direction == 2) {
    for (int y = 0; y < lat.l2; ++y) add_x(g, lat.h(offset, y), 1, p);
  } else {
    throw InvalidArgument("loop direction must be 1 or 2");
  }
  return g;
}

QuditStabilizerState toric_ground(const TorusLattice& lat, int p, const GroundStateLabel& label) {
  lat.validate();
  if (!is_prime(p)) throw InvalidArgument("toric_ground: p must be prime");
  if (label.first < 0 || label.first >= p || label.second < 0 || label.second >= p) {
    throw InvalidArgument("toric_ground: label entries must lie in [0, p)");
  }
  std::vector<Pauli> gens;
  // One star and one plaquette are products of the others.
  for (int y = 0; y < lat.l2; ++y) {
    for (int x = 0; x < lat.l1; ++x) {
      if (x == 0 && y == 0) continue;
      gens.push_back(star(lat, x, y, p));
      gens.push_back(plaquette(lat, x, y, p));
    }
  }
  auto fixed = [&](Pauli g, int eigen_exponent) {
    g.phase = wrap(-2 * eigen_exponent, 2 * p);
    return g;
  };
  if (label.kind == GroundStateLabel::Kind::string_net) {
    gens.push_back(fixed(loop_m(lat, 2, 0, p), label.first));
    gens.push_back(fixed(loop_m(lat, 1, 0, p), label.second));
  } else {
    gens.push_back(fixed(loop_e(lat, 1, 0, p), label.first));
    gens.push_back(fixed(loop_m(lat, 1, 0, p), label.second));
  }
  return QuditStabilizerState::from_generators(p, lat.num_qudits(), std::move(gens));
}

int link_row(const TorusLattice& lat, int qudit) {
  const int cell = qudit / 2;
  return 2 * (cell / lat.l1) + qudit % 2;
}

RegionSpec annulus_regions(const TorusLattice& lat, RowWindow m1, RowWindow m2) {
  lat.validate();
  const int rows = 2 * lat.l2;
  // 0 = A, 1 = B, 2 = M
  std::vector<int> tag(static_cast<std::size_t>(rows), -1);
  for (const RowWindow& w : {m1, m2}) {
    if (w.count < 1 || w.count >= rows) throw InvalidArgument("annulus window has bad width");
    for (int k = 0; k < w.count; ++k) {
      int& t = tag[wrap(w.first + k, rows)];
      if (t == 2) throw InvalidArgument("annulus windows overlap");
      t = 2;
    }
  }
  int row = wrap(m1.first + m1.count, rows);
  int label = 0;
  int runs = 0;
  for (int step = 0; step < rows; ++step, row = wrap(row + 1, rows)) {
    if (tag[row] == 2) {
      if (step > 0 && tag[wrap(row - 1, rows)] != 2) label = 1;
      continue;
    }
    if (step == 0 || tag[wrap(row - 1, rows)] == 2) ++runs;
    tag[row] = label;
  }
  if (runs != 2) throw InvalidArgument("annulus windows must leave two separate cylinders");
  RegionSpec r;
  for (int q = 0; q < lat.num_qudits(); ++q) {
    const int t = tag[link_row(lat, q)];
    (t == 0 ? r.a : t == 1 ? r.b : r.m).push_back(q);
  }
  r.validate(lat.num_qudits());
  return r;
}

TopologicalMie mie_trajectory(QuditStabilizerState state, const RegionSpec& regions, Basis basis,
                              RngStream& rng) {
  regions.validate(state.num_qudits(), false);
  for (int q : regions.m) state.measure_site(q, basis, rng);
  return {state.entropy(regions.a), state.entropy(regions.b)};
}

double mes_decomposition_entropy(int p, const GroundStateLabel& label) {
  if (!is_prime(p)) throw InvalidArgument("mes_decomposition_entropy: p must be prime");
  // |c1, c2>_SN = p^{-1/2} sum_g w^{-c1 g} |g, c2>; an MES is a single term.
  std::vector<std::complex<double>> amp;
  if (label.kind == GroundStateLabel::Kind::mes) {
    amp.push_back(1.0);
  } else {
    for (int g = 0; g < p; ++g) {
      amp.push_back(std::polar(1.0 / std::sqrt(static_cast<double>(p)),
                               -2.0 * std::numbers::pi * label.first * g / p));
    }
  }
  double s = 0.0;
  for (const auto& a : amp) s -= xlogx_clipped(std::norm(a));
  return s;
}

}  // namespace mieflow::stab
