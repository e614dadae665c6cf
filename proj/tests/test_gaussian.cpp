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

#include <cmath>
#include <map>

#include "mieflow/gaussian.hpp"
#include "mieflow/lattice.hpp"
#include "mieflow/oracle.hpp"

using namespace mieflow;
using namespace mieflow::gaussian;

namespace {


GaussianState bonding_pair() {
  Eigen::MatrixXcd c(2, 2);
  c << 0.5, 0.5, 0.5, 0.5;
  return GaussianState(c);
}

// Ring of L sites with unit hopping, shifted so that the ground state holds
// the requested number of particles.
Eigen::MatrixXcd ring_hopping(int length, double shift) {
  Eigen::MatrixXcd h = shift * Eigen::MatrixXcd::Identity(length, length);
  for (int i = 0; i < length; ++i) {
    h(i, (i + 1) % length) = -1.0;
    h((i + 1) % length, i) = -1.0;
  }
  return h;
}

}  // namespace

TEST_CASE("GaussianState validates its input") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 0.5, 0.4, 0.1, 0.5;
  CHECK_THROWS_AS(GaussianState{bad}, InvalidArgument);
  Eigen::MatrixXcd out_of_range = Eigen::MatrixXcd::Identity(2, 2) * 1.5;
  CHECK_THROWS_AS(GaussianState{out_of_range}, InvalidArgument);
  const std::vector<int> occ{1, 0, 1};
  const auto s = GaussianState::from_occupations(occ);
  CHECK(s.particle_number() == doctest::Approx(2.0));
  CHECK(s.projector_error() < 1e-14);
  CHECK(s.is_real());
}

TEST_CASE("measure_orbital examples") {
  const std::vector<int> occ{1, 0};
  const auto diag = GaussianState::from_occupations(occ);
  const auto m = measure_orbital(diag, 0, std::nullopt, 0.99);
  CHECK(m.outcome == 1);
  CHECK(m.probability == doctest::Approx(1.0));
  CHECK((m.state.corr() - diag.corr()).norm() < 1e-14);

  const auto one = measure_orbital(bonding_pair(), 0, 1, 0.0);
  CHECK(one.probability == doctest::Approx(0.5));
  CHECK((one.state.corr() - Eigen::Vector2cd(1, 0).asDiagonal().toDenseMatrix()).norm() < 1e-12);
  const auto zero = measure_orbital(bonding_pair(), 0, 0, 0.0);
  CHECK(zero.probability == doctest::Approx(0.5));
  CHECK((zero.state.corr() - Eigen::Vector2cd(0, 1).asDiagonal().toDenseMatrix()).norm() < 1e-12);

  CHECK_THROWS_AS(measure_orbital(diag, 1, 1, 0.0), NumericalError);
}

TEST_CASE("measure_orbital agrees with the dense projection") {
  const auto g = oracle::ground_state(oracle::fermion_hamiltonian(ring_hopping(6, 0.5)));
  const GaussianState s(oracle::correlation_matrix(g.state));
  for (int outcome = 0; outcome < 2; ++outcome) {
    const auto m = measure_orbital(s, 2, outcome, 0.0);
    const auto p = oracle::project_site(g.state, 2, oracle::z_frame(2), outcome);
    CHECK(m.probability == doctest::Approx(p.probability).epsilon(1e-12));
    REQUIRE(p.state.has_value());
    CHECK((m.state.corr() - oracle::correlation_matrix(*p.state)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(m.state.projector_error() < 1e-10);
    for (int j = 0; j < 6; ++j) {
      CHECK(m.state.corr()(2, j) == (j == 2 ? cplx(outcome) : cplx(0.0)));
    }
  }
}

TEST_CASE("measure_region examples") {
  const std::vector<int> occ{1, 0, 1, 0};
  const std::vector<int> all{0, 1, 2, 3};
  RngStream rng(1, 0);
  const auto r = measure_region(GaussianState::from_occupations(occ), all, rng);
  CHECK(r.record.outcomes == occ);
  CHECK(r.record.log_probability == doctest::Approx(0.0));

  const std::vector<int> both{0, 1};
  std::map<std::vector<int>, int> seen;
  for (int t = 0; t < 200; ++t) {
    RngStream s(2, static_cast<std::uint64_t>(t));
    const auto res = measure_region(bonding_pair(), both, s);
    ++seen[res.record.outcomes];
    CHECK(res.record.log_probability == doctest::Approx(std::log(0.5)));
  }
  CHECK(seen.size() == 2);
  CHECK(seen.count({1, 0}) == 1);
  CHECK(seen.count({0, 1}) == 1);

  const std::vector<int> dup{0, 0};
  CHECK_THROWS_AS(measure_region(bonding_pair(), dup, rng), InvalidArgument);
}

TEST_CASE("sampled outcome frequencies match the dense Born distribution") {
  const auto g = oracle::ground_state(oracle::fermion_hamiltonian(ring_hopping(6, 0.5)));
  const GaussianState s(oracle::correlation_matrix(g.state));
  const std::vector<int> m{2, 3};
  const auto exact = oracle::outcome_distribution(g.state, {oracle::z_frame(2), oracle::z_frame(3)});
  const TrajectorySampler sampler(s, m, std::vector<int>{0, 1, 4, 5});
  constexpr int kSamples = 100000;
  std::vector<double> counts(4, 0.0);
  for (int t = 0; t < kSamples; ++t) {
    RngStream rng(3, static_cast<std::uint64_t>(t));
    const auto smp = sampler.sample(rng);
    counts[2 * smp.outcomes[0] + smp.outcomes[1]] += 1.0;
  }
  for (int k = 0; k < 4; ++k) {
    const double sigma = std::sqrt(exact[k] * (1 - exact[k]) / kSamples);
    CHECK(std::abs(counts[k] / kSamples - exact[k]) <= 4.0 * sigma + 1e-12);
    const std::vector<int> forced{k / 2, k % 2};
    if (exact[k] > 1e-12) {
      CHECK(std::exp(sampler.sample_forced(forced).log_probability) == doctest::Approx(exact[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("joint Born distribution does not depend on measurement order") {
  const auto s = lattice::xx_chain_state(10, 0.5);
  const std::vector<int> fwd{1, 4, 7};
  const std::vector<int> rev{7, 4, 1};
  const TrajectorySampler a(s, fwd, std::vector<int>{0});
  const TrajectorySampler b(s, rev, std::vector<int>{0});
  for (int code = 0; code < 8; ++code) {
    const std::vector<int> o{code >> 2 & 1, code >> 1 & 1, code & 1};
    const std::vector<int> o_rev{o[2], o[1], o[0]};
    double pa = 0.0;
    double pb = 0.0;
    try {
      pa = std::exp(a.sample_forced(o).log_probability);
    } catch (const NumericalError&) {
    }
    try {
      pb = std::exp(b.sample_forced(o_rev).log_probability);
    } catch (const NumericalError&) {
    }
    CHECK(pa == doctest::Approx(pb).epsilon(1e-10));
  }
}

TEST_CASE("entropy and mutual information") {
  const std::vector<int> occ{1, 0, 1};
  const std::vector<int> r{0, 1};
  CHECK(entropy(GaussianState::from_occupations(occ), r) == doctest::Approx(0.0));
  CHECK(entropy(bonding_pair(), std::vector<int>{0}) == doctest::Approx(kLn2));
  CHECK(mutual_information(bonding_pair(), std::vector<int>{0}, std::vector<int>{1}) ==
        doctest::Approx(2 * kLn2));
  CHECK(mutual_information(GaussianState::from_occupations(occ), std::vector<int>{0}, std::vector<int>{2}) ==
        doctest::Approx(0.0));

  const auto g = oracle::ground_state(oracle::fermion_hamiltonian(ring_hopping(8, 0.7)));
  const GaussianState s(oracle::correlation_matrix(g.state));
  const std::vector<int> half{0, 1, 2, 3};
  CHECK(std::abs(entropy(s, half) - oracle::entropy(g.state, half)) < 1e-8);
}

TEST_CASE("mutual information of far intervals decays with distance") {
  const auto g = oracle::ground_state(oracle::fermion_hamiltonian(ring_hopping(10, 0.0)));
  const GaussianState s(oracle::correlation_matrix(g.state));
  // Qubit and fermion entropies agree on contiguous regions.
  const std::vector<int> a{0, 1};
  const std::vector<int> b{2, 3, 4};
  CHECK(mutual_information(s, a, b) == doctest::Approx(oracle::mutual_information(g.state, a, b)).epsilon(1e-8));
  double prev = 1e9;
  for (int d = 1; d <= 5; d += 2) {
    const double mi = mutual_information(s, std::vector<int>{0}, std::vector<int>{d});
    CHECK(mi < prev);
    CHECK(mi > 0.0);
    prev = mi;
  }
}

TEST_CASE("post-measurement S(A) equals S(B) for pure states") {
  const auto s = lattice::xx_chain_state(32, 0.5);
  const auto regions = lattice::interval_regions(32, 0, 3, 10, 13);
  SiteSet ab = regions.a;
  ab.insert(ab.end(), regions.b.begin(), regions.b.end());
  const TrajectorySampler sampler(s, regions.m, ab);
  for (int t = 0; t < 20; ++t) {
    RngStream rng(4, static_cast<std::uint64_t>(t));
    const auto smp = sampler.sample(rng);
    const Eigen::MatrixXcd ca = smp.kept_corr.topLeftCorner(4, 4);
    const Eigen::MatrixXcd cb = smp.kept_corr.bottomRightCorner(4, 4);
    CHECK(std::abs(entropy_of_correlation(ca) - entropy_of_correlation(cb)) < 1e-7);
    const Eigen::MatrixXcd c = smp.kept_corr;
    CHECK((c * c - c).cwiseAbs().maxCoeff() < 1e-7);
  }
}
