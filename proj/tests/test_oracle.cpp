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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mieflow/oracle.hpp"

using namespace mieflow;
using namespace mieflow::oracle;

namespace {


StateVector ghz3() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return StateVector::qubits(v);
}

StateVector bell_pair() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return StateVector::qubits(v);
}

StateVector random_state(RngStream& rng, int n) {
  Eigen::VectorXcd v(1 << n);
  for (auto& x : v) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return StateVector::qubits(v.normalized());
}

Eigen::MatrixXcd random_matrix(RngStream& rng, int d) {
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  }
  return m;
}

}  // namespace

TEST_CASE("ground_state of diagonal and two-site hopping Hamiltonians") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(1, 1) = 1.0;
  const auto g = ground_state(d);
  CHECK(std::abs(g.state.amplitudes()(0) - cplx(1.0)) < 1e-12);
  CHECK(g.energy == doctest::Approx(0.0));

  // One fermion on two sites: bonding state (|10> + |01>)/sqrt2 at energy -1.
  Eigen::MatrixXcd h(2, 2);
  h << 0, -1, -1, 0;
  const auto b = ground_state(fermion_hamiltonian(h));
  CHECK(b.energy == doctest::Approx(-1.0));
  CHECK(std::abs(b.state.amplitudes()(1)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(b.state.amplitudes()(1) - b.state.amplitudes()(2)) < 1e-12);
}

TEST_CASE("ground_state energy equals the minimum of the explicit spectrum") {
  // -ZZ - XX in the computational basis.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
  h.diagonal() << -1, 1, 1, -1;
  h(0, 3) = h(3, 0) = h(1, 2) = h(2, 1) = -1.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  CHECK(ground_state(h).energy == doctest::Approx(es.eigenvalues()(0)));
  CHECK(ground_state(h).energy == doctest::Approx(-2.0));
}

TEST_CASE("ground_state rejects non-Hermitian input") {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(ground_state(h), InvalidArgument);
}

TEST_CASE("project_site examples") {
  const auto zero = StateVector::qubits(Eigen::Vector2cd(1.0, 0.0));
  const auto p0 = project_site(zero, 0, z_frame(0), 0);
  CHECK(p0.probability == doctest::Approx(1.0));
  const auto p1 = project_site(zero, 0, z_frame(0), 1);
  CHECK(p1.probability == doctest::Approx(0.0));
  CHECK_FALSE(p1.state.has_value());

  const auto bell = project_site(bell_pair(), 0, z_frame(0), 1);
  CHECK(bell.probability == doctest::Approx(0.5));
  REQUIRE(bell.state.has_value());
  CHECK(std::abs(std::abs(bell.state->amplitudes()(3)) - 1.0) < 1e-12);

  const auto g = project_site(ghz3(), 1, x_frame(1), 0);
  CHECK(g.probability == doctest::Approx(0.5));
  REQUIRE(g.state.has_value());
  const std::vector<int> outer{0, 2};
  CHECK(entropy(*g.state, std::vector<int>{0}) == doctest::Approx(kLn2));
  CHECK(entropy(*g.state, outer) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("entropy examples and bounds") {
  const auto prod = StateVector::product({Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1, 1)});
  CHECK(entropy(prod, std::vector<int>{0}) == doctest::Approx(0.0));
  CHECK(entropy(bell_pair(), std::vector<int>{1}) == doctest::Approx(kLn2));
  CHECK(entropy(ghz3(), std::vector<int>{0, 1}) == doctest::Approx(kLn2));
  RngStream rng(3, 0);
  const auto psi = random_state(rng, 5);
  const std::vector<int> a{0, 3};
  const std::vector<int> ac{1, 2, 4};
  CHECK(entropy(psi, a) == doctest::Approx(entropy(psi, ac)).epsilon(1e-10));
  CHECK(entropy(psi, a) <= 2 * kLn2 + 1e-12);
}

TEST_CASE("Born completeness over product frames") {
  RngStream rng(5, 0);
  const auto psi = random_state(rng, 4);
  const ProductBasis basis{x_frame(0), bell_frame(1, 3), z_frame(2)};
  const auto p = outcome_distribution(psi, basis);
  CHECK(p.size() == 16);
  double total = 0.0;
  for (double x : p) total += x;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("mie_mii_exact: singlet pairs under a Bell measurement") {
  const auto psi = singlet_product(4, {{0, 1}, {2, 3}});
  const RegionSpec r{{0}, {3}, {1, 2}, {}, {}};
  const auto res = mie_mii_exact(psi, r, {bell_frame(1, 2)});
  CHECK(res.mie == doctest::Approx(kLn2));
  CHECK(res.post_mutual_info == doctest::Approx(2.0 * res.mie).epsilon(1e-10));
  CHECK(res.pre_mutual_info == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mie_mii_exact: GHZ3 values") {
  const RegionSpec r{{0}, {2}, {1}, {}, {}};
  const auto z = mie_mii_exact(ghz3(), r, {z_frame(1)});
  CHECK(z.pre_mutual_info == doctest::Approx(kLn2));
  CHECK(z.mie == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z.mii == doctest::Approx(-kLn2));
  const auto x = mie_mii_exact(ghz3(), r, {x_frame(1)});
  CHECK(x.mie == doctest::Approx(kLn2));
  CHECK(x.mii == doctest::Approx(kLn2));
}

TEST_CASE("mie_mii_exact: pure-state identity on random states") {
  RngStream rng(9, 0);
  for (int t = 0; t < 5; ++t) {
    const auto psi = random_state(rng, 6);
    const RegionSpec r{{0, 1}, {5}, {2, 3, 4}, {}, {}};
    const auto res = mie_mii_exact(psi, r, {x_frame(2), z_frame(3), x_frame(4)});
    CHECK(std::abs(res.post_mutual_info - 2.0 * res.mie) < 1e-10);
    CHECK(res.mie >= 0.0);
    CHECK(res.mii <= 2.0 * res.mie + 1e-12);
  }
}

TEST_CASE("mie_mii_exact rejects overlapping regions") {
  const RegionSpec r{{0}, {0}, {1, 2}, {}, {}};
  CHECK_THROWS_AS(mie_mii_exact(ghz3(), r, {z_frame(1), z_frame(2)}), InvalidArgument);
}

TEST_CASE("strange correlator examples") {
  const auto ref = StateVector::qubits(Eigen::Vector4cd(1, 0, 0, 0));
  const LocalOperator id_a{{0}, Eigen::Matrix2cd::Identity()};
  const LocalOperator id_b{{1}, Eigen::Matrix2cd::Identity()};
  const auto trivial = strange_correlator(ref, ref, id_a, id_b);
  REQUIRE(trivial.has_value());
  CHECK(std::abs(trivial->value - cplx(1.0)) < 1e-12);

  Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();
  lower(0, 1) = 1.0;
  const double l0 = 0.8;
  const double l1 = 0.6;
  const auto psi = StateVector::qubits(Eigen::Vector4cd(l0, 0, 0, l1));
  const auto sc = strange_correlator(psi, ref, {{0}, lower}, {{1}, lower});
  REQUIRE(sc.has_value());
  CHECK(std::abs(sc->connected - cplx(l1 / l0)) < 1e-12);

  const auto orth = StateVector::qubits(Eigen::Vector4cd(0, 1, 0, 0));
  CHECK_FALSE(strange_correlator(orth, ref, id_a, id_b).has_value());
}

TEST_CASE("strange-correlator bound on singlet pairs and random states") {
  Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();
  lower(0, 1) = 1.0;
  const Eigen::Vector2cd up(1, 0);
  const auto psi = singlet_product(4, {{0, 1}, {2, 3}});
  const RegionSpec r{{0}, {3}, {1, 2}, {}, {}};
  const auto rep = check_sc_bound(psi, r, {bell_frame(1, 2)}, up, up, lower, lower);
  CHECK(rep.mie == doctest::Approx(kLn2));
  CHECK(rep.holds());
  CHECK(rep.bound > 0.0);

  const auto prod = StateVector::product({up, up, up});
  const RegionSpec pr{{0}, {2}, {1}, {}, {}};
  const auto zero = check_sc_bound(prod, pr, {z_frame(1)}, up, up, lower, lower);
  CHECK(zero.mie == doctest::Approx(0.0));
  CHECK(zero.bound == doctest::Approx(0.0));

  RngStream rng(11, 0);
  for (int t = 0; t < 20; ++t) {
    const auto s = random_state(rng, 5);
    const RegionSpec rr{{0}, {4}, {1, 2, 3}, {}, {}};
    const Eigen::Vector2cd ra(rng.uniform(), rng.uniform());
    const Eigen::Vector2cd rb(rng.uniform(), rng.uniform());
    const auto rep2 = check_sc_bound(s, rr, {z_frame(1), x_frame(2), z_frame(3)}, ra, rb,
                                     random_matrix(rng, 2), random_matrix(rng, 2));
    CHECK(rep2.holds());
  }
}

TEST_CASE("free-fermion helpers") {
  const std::vector<int> digits{1, 0, 1};
  const auto basis = StateVector::basis_state({2, 2, 2}, digits);
  const Eigen::MatrixXcd c = correlation_matrix(basis);
  CHECK((c - Eigen::Vector3cd(1, 0, 1).asDiagonal().toDenseMatrix()).norm() < 1e-12);

  Eigen::MatrixXcd h(2, 2);
  h << 0, -1, -1, 0;
  const auto g = ground_state(fermion_hamiltonian(h));
  CHECK(g.energy == doctest::Approx(-1.0));
  const Eigen::MatrixXcd cg = correlation_matrix(g.state);
  CHECK(std::abs(cg(0, 1) - cplx(0.5)) < 1e-12);
  CHECK(std::abs(cg(0, 0) - cplx(0.5)) < 1e-12);
}
