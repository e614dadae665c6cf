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

#include "mieflow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mieflow::lattice {

using std::numbers::pi;

namespace {

// exp(i theta), with components below 1e-15 set to zero so that 0 and pi
// twists keep real models real.
cplx twist_phase(double theta) {
  double c = std::cos(theta);
  double s = std::sin(theta);
  if (std::abs(c) < 1e-15) c = 0.0;
  if (std::abs(s) < 1e-15) s = 0.0;
  return {c, s};
}

}  // namespace

void CylinderGeometry::validate() const {
  if (lx < 4 || ly < 4) throw InvalidArgument("cylinder dimensions must be at least 4");
}

TightBinding chern_model(double t1, double t2, double v) {
  TightBinding m;
  m.orbitals = 2;
  m.onsite = {v, -v};
  const cplx up = std::polar(t1, -pi / 4);
  const cplx down = std::polar(t1, pi / 4);
  // a(R) to the four b sites around it; b sits at R + (1/2, 1/2).
  m.hoppings.push_back({0, 1, 0, 0, up});
  m.hoppings.push_back({0, 1, -1, -1, up});
  m.hoppings.push_back({0, 1, -1, 0, down});
  m.hoppings.push_back({0, 1, 0, -1, down});
  m.hoppings.push_back({0, 0, 1, 0, t2});
  m.hoppings.push_back({0, 0, 0, 1, -t2});
  m.hoppings.push_back({1, 1, 1, 0, -t2});
  m.hoppings.push_back({1, 1, 0, 1, t2});
  return m;
}

TightBinding square_model(double t) {
  TightBinding m;
  m.orbitals = 1;
  m.onsite = {0.0};
  m.hoppings.push_back({0, 0, 1, 0, -t});
  m.hoppings.push_back({0, 0, 0, 1, -t});
  return m;
}

Eigen::MatrixXcd real_space_hamiltonian(const TightBinding& model, const CylinderGeometry& geom) {
  geom.validate();
  const int orb = model.orbitals;
  const int n = geom.lx * geom.ly * orb;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  auto index = [&](int x, int y, int o) { return (y * geom.lx + x) * orb + o; };
  for (int y = 0; y < geom.ly; ++y) {
    for (int x = 0; x < geom.lx; ++x) {
      for (int o = 0; o < orb && o < static_cast<int>(model.onsite.size()); ++o) {
        h(index(x, y, o), index(x, y, o)) += model.onsite[o];
      }
      for (const Hopping& t : model.hoppings) {
        int y2 = y + t.dy;
        if (y2 < 0 || y2 >= geom.ly) {
          if (!geom.periodic_y) continue;
          y2 = ((y2 % geom.ly) + geom.ly) % geom.ly;
        }
        const int xs = x + t.dx;
        const int x2 = (xs % geom.lx + geom.lx) % geom.lx;
        const int winding = (xs - x2) / geom.lx;
        const cplx amp = winding == 0 ? t.amplitude : t.amplitude * twist_phase(geom.x_twist * winding);
        const int i = index(x, y, t.from);
        const int j = index(x2, y2, t.to);
        h(i, j) += amp;
        h(j, i) += std::conj(amp);
      }
    }
  }
  return h;
}

Eigen::MatrixXcd bloch_hamiltonian(const TightBinding& model, double kx, double ky) {
  const int orb = model.orbitals;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(orb, orb);
  for (int o = 0; o < orb && o < static_cast<int>(model.onsite.size()); ++o) h(o, o) += model.onsite[o];
  for (const Hopping& t : model.hoppings) {
    const cplx term = t.amplitude * std::polar(1.0, kx * t.dx + ky * t.dy);
    h(t.from, t.to) += term;
    h(t.to, t.from) += std::conj(term);
  }
  return h;
}

FilledState fill_lowest(const Eigen::MatrixXcd& h, int particles) {
  const auto n = static_cast<int>(h.rows());
  if (particles < 0 || particles > n) throw InvalidArgument("fill_lowest: bad particle number");
  Eigen::VectorXd e;
  Eigen::MatrixXcd orbitals;
  if (n == 0 || h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
    if (es.info() != Eigen::Success) throw NumericalError("fill_lowest: eigensolver failed");
    e = es.eigenvalues();
    orbitals = es.eigenvectors().leftCols(particles).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("fill_lowest: eigensolver failed");
    e = es.eigenvalues();
    orbitals = es.eigenvectors().leftCols(particles);
  }
  FilledState out{gaussian::GaussianState::from_orbitals(orbitals), 0.0, 1, e.head(particles).sum()};
  if (particles > 0 && particles < n) {
    out.gap = e(particles) - e(particles - 1);
    const double level = e(particles - 1);
    out.shell_degeneracy = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      if (std::abs(e(i) - level) < 1e-9) ++out.shell_degeneracy;
    }
  }
  return out;
}

gaussian::GaussianState xx_chain_state(int length, double filling) {
  if (length < 4 || length % 2 != 0) throw InvalidArgument("xx chain length must be even and >= 4");
  if (!(filling > 0.0 && filling < 1.0)) throw InvalidArgument("filling must lie in (0, 1)");
  const int particles = static_cast<int>(std::floor(length * filling + 1e-12));
  // Modes m in (-L/2, L/2]; order by |m| (energy), then +m first.
  std::vector<int> order;
  order.push_back(0);
  for (int a = 1; a <= length / 2; ++a) {
    order.push_back(a);
    if (a != length / 2) order.push_back(-a);
  }
  Eigen::VectorXcd row = Eigen::VectorXcd::Zero(length);
  for (int p = 0; p < particles; ++p) {
    const double k = 2.0 * pi * order[p] / length;
    for (int d = 0; d < length; ++d) row(d) += std::polar(1.0 / length, k * d);
  }
  Eigen::MatrixXcd c(length, length);
  for (int i = 0; i < length; ++i) {
    for (int j = 0; j < length; ++j) c(i, j) = row(((i - j) % length + length) % length);
  }
  for (int i = 0; i < length; ++i) c(i, i) = cplx(static_cast<double>(particles) / length, 0.0);
  return gaussian::GaussianState::adopt(std::move(c));
}

Eigen::MatrixXcd xx_chain_closed_form(int length, double filling) {
  const double n = length * filling / 2.0;
  Eigen::MatrixXcd c(length, length);
  for (int i = 0; i < length; ++i) {
    for (int j = 0; j < length; ++j) {
      if (i == j) {
        c(i, j) = 2.0 * n / length;
        continue;
      }
      const double x = 2.0 * pi * (i - j) / length;
      const cplx v = 1.0 + std::polar(1.0, n * x) +
                     2.0 * std::sin((n - 1.0) * x / 2.0) / std::sin(x / 2.0) * std::cos(n * x / 2.0);
      c(i, j) = v / static_cast<double>(length);
    }
  }
  return c;
}

double filling_from_chemical_potential(double mu) {
  if (!(std::abs(mu) < 1.0)) throw InvalidArgument("chemical potential must satisfy |mu| < 1");
  return std::acos(mu) / pi;
}

FilledState chern_state(const CylinderGeometry& geom, double t1, double t2, double v) {
  const Eigen::MatrixXcd h = real_space_hamiltonian(chern_model(t1, t2, v), geom);
  FilledState s = fill_lowest(h, static_cast<int>(h.rows() / 2));
  if (s.gap < 1e-8) throw NumericalError("chern_state: spectrum is gapless at half filling");
  return s;
}

FilledState metal_state(const CylinderGeometry& geom) {
  const Eigen::MatrixXcd h = real_space_hamiltonian(square_model(), geom);
  return fill_lowest(h, static_cast<int>(h.rows() / 2));
}

int chern_number(double t1, double t2, double v, int grid) {
  if (grid < 2) throw InvalidArgument("chern_number: grid must be >= 2");
  const TightBinding model = chern_model(t1, t2, v);
  const int n = grid;
  std::vector<Eigen::Vector2cd> u(static_cast<std::size_t>(n * n));
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const Eigen::MatrixXcd h = bloch_hamiltonian(model, 2 * pi * ix / n, 2 * pi * iy / n);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      if (es.eigenvalues()(1) - es.eigenvalues()(0) < 1e-8) {
        throw NumericalError("chern_number: gap closes on the k-grid");
      }
      u[static_cast<std::size_t>(ix * n + iy)] = es.eigenvectors().col(0);
    }
  }
  auto at = [&](int ix, int iy) -> const Eigen::Vector2cd& {
    return u[static_cast<std::size_t>(((ix % n + n) % n) * n + (iy % n + n) % n)];
  };
  auto link = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
    const cplx z = a.dot(b);
    return z / std::abs(z);
  };
  double total = 0.0;
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const cplx w = link(at(ix, iy), at(ix + 1, iy)) * link(at(ix + 1, iy), at(ix + 1, iy + 1)) *
                     link(at(ix + 1, iy + 1), at(ix, iy + 1)) * link(at(ix, iy + 1), at(ix, iy));
      total += std::arg(w);
    }
  }
  return static_cast<int>(std::lround(total / (2 * pi)));
}

CrossRatio cross_ratio(double x1, double x2, double x3, double x4, double length, bool chord) {
  if (!(x1 < x2 && x2 < x3 && x3 < x4)) {
    throw InvalidArgument("cross_ratio: points must be strictly increasing");
  }
  if (chord && !(x4 - x1 < length)) throw InvalidArgument("cross_ratio: points exceed the ring");
  auto dist = [&](double a, double b) {
    const double d = std::abs(b - a);
    return chord ? length / pi * std::sin(pi * d / length) : d;
  };
  CrossRatio out;
  out.eta = dist(x1, x2) * dist(x3, x4) / (dist(x1, x3) * dist(x2, x4));
  out.eta_tilde = out.eta / (1.0 - out.eta);
  return out;
}

CrossRatio interval_cross_ratio(int length, int a_first, int a_last, int b_first, int b_last,
                                bool chord) {
  return cross_ratio(a_first, a_last + 1.0, b_first, b_last + 1.0, length, chord);
}

RegionSpec interval_regions(int length, int x1, int x2, int x3, int x4) {
  if (!(0 <= x1 && x1 <= x2 && x2 < x3 && x3 <= x4 && x4 < length)) {
    throw InvalidArgument("interval_regions: need 0 <= x1 <= x2 < x3 <= x4 < L");
  }
  RegionSpec r;
  for (int i = 0; i < length; ++i) {
    if (i >= x1 && i <= x2) {
      r.a.push_back(i);
    } else if (i >= x3 && i <= x4) {
      r.b.push_back(i);
    } else {
      r.m.push_back(i);
    }
  }
  r.validate(length);
  return r;
}

RegionSpec ring_regions(const CylinderGeometry& geom, int orbitals, int width, int r) {
  geom.validate();
  if (width < 1 || r < 1 || orbitals < 1) throw InvalidArgument("ring_regions: width, r >= 1");
  const int span = 2 * width + r;
  if (span > geom.ly) throw InvalidArgument("ring_regions: rings do not fit on the cylinder");
  const int ya = (geom.ly - span) / 2;
  const int yb = ya + width + r;
  RegionSpec out;
  for (int y = 0; y < geom.ly; ++y) {
    SiteSet* target = &out.m;
    if (y >= ya && y < ya + width) target = &out.a;
    if (y >= yb && y < yb + width) target = &out.b;
    for (int x = 0; x < geom.lx; ++x) {
      for (int o = 0; o < orbitals; ++o) target->push_back((y * geom.lx + x) * orbitals + o);
    }
  }
  out.validate(geom.lx * geom.ly * orbitals);
  return out;
}

}  // namespace mieflow::lattice
