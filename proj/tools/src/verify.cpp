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

#include "mieflow/cli/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mieflow/lattice.hpp"
#include "mieflow/mera.hpp"
#include "mieflow/singlet.hpp"
#include "mieflow/stabilizer.hpp"

namespace mieflow::cli {

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

int uniform_int(RngStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Eigen::MatrixXcd random_hermitian(RngStream& rng, int n) {
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h(i, j) = cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  }
  return (h + h.adjoint()) / 2.0;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> oracle_suite(std::uint64_t seed, int threads) {
  std::vector<CheckResult> out;
  RngStream rng(seed, 0x0c);
  for (int i = 0; i < 12; ++i) {
    const auto inst = random_gaussian_instance(rng, 4, 9);
    const auto cmp = compare_with_oracle(inst, {4000, mix64(seed + static_cast<std::uint64_t>(i)), threads});
    CheckResult r;
    r.name = "gaussian vs dense #" + std::to_string(i + 1) + " (n=" +
             std::to_string(inst.state.num_modes()) + ")";
    r.passed = cmp.agrees(4.0) && cmp.max_probability_error <= 1e-10;
    r.detail = "exact " + fmt(cmp.exact) + ", MC " + fmt(cmp.mc.mean) + " +- " + fmt(cmp.mc.stderr_mean) +
               ", max |dp| " + fmt(cmp.max_probability_error);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> topo_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const stab::TorusLattice lat{4, 6};
  const std::vector<std::pair<stab::RowWindow, stab::RowWindow>> annuli = {
      {stab::cell_rows(0, 1), stab::cell_rows(3, 1)},
      {stab::cell_rows(1, 1), stab::cell_rows(3, 2)},
      {stab::cell_rows(5, 2), stab::cell_rows(2, 1)}};
  // Sum of per-layer entropies, worst deviation over annuli and seeds.
  auto deviation = [&](const std::vector<int>& primes, stab::GroundStateLabel label, stab::Basis basis,
                       double expected) {
    double worst = 0.0;
    for (const auto& [m1, m2] : annuli) {
      const RegionSpec regions = stab::annulus_regions(lat, m1, m2);
      std::vector<stab::QuditStabilizerState> layers;
      for (int p : primes) layers.push_back(stab::toric_ground(lat, p, label));
      for (int t = 0; t < 16; ++t) {
        double v = 0.0;
        for (std::size_t k = 0; k < layers.size(); ++k) {
          RngStream rng(seed + k, static_cast<std::uint64_t>(t));
          v += stab::mie_trajectory(layers[k], regions, basis, rng).entropy_a;
        }
        worst = std::max(worst, std::abs(v - expected));
      }
    }
    return worst;
  };
  auto check = [&](const std::string& name, const std::vector<int>& primes, stab::GroundStateLabel label,
                   stab::Basis basis, double expected) {
    const double worst = deviation(primes, label, basis, expected);
    out.push_back({name, worst <= 1e-9,
                   "expected " + fmt(expected) + ", max deviation " + fmt(worst) + " (3 annuli x 16 seeds)"});
  };
  const auto sn = stab::GroundStateLabel::string_net(0, 0);
  check("Z2 string-net, X basis = ln 2", {2}, sn, stab::Basis::x, std::log(2.0));
  check("Z3 string-net, X basis = ln 3", {3}, sn, stab::Basis::x, std::log(3.0));
  check("Z5 string-net, X basis = ln 5", {5}, sn, stab::Basis::x, std::log(5.0));
  check("Z2 x Z3 string-net, X basis = ln 6", {2, 3}, sn, stab::Basis::x, std::log(6.0));
  check("Z2 MES, X basis = 0", {2}, stab::GroundStateLabel::mes(0, 0), stab::Basis::x, 0.0);
  check("Z3 MES, X basis = 0", {3}, stab::GroundStateLabel::mes(1, 2), stab::Basis::x, 0.0);
  check("Z2 string-net, Z basis = 0", {2}, sn, stab::Basis::z, 0.0);
  double worst = 0.0;
  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      worst = std::max(worst, deviation({3}, stab::GroundStateLabel::string_net(c1, c2), stab::Basis::x,
                                        std::log(3.0)));
    }
  }
  out.push_back({"Z3 string-net, all 9 homology labels = ln 3", worst <= 1e-9,
                 "max deviation " + fmt(worst)});
  return out;
}

std::vector<CheckResult> rs_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  constexpr int kLength = 12;
  const RegionSpec regions = lattice::interval_regions(kLength, 0, 1, 4, 5);
  const auto pairing = singlet::nearest_neighbor_pairing(kLength, regions.m, singlet::Boundary::periodic);
  oracle::ProductBasis bell;
  for (const auto& [i, j] : pairing) bell.push_back(oracle::bell_frame(i, j));
  oracle::ProductBasis zb;
  for (int s : regions.m) zb.push_back(oracle::z_frame(s));
  for (int t = 0; t < 6; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t) + 100);
    const auto config = singlet::sdrg_sample(kLength, rng, singlet::Boundary::periodic);
    const auto dense = oracle::singlet_product(kLength, config.pairs());
    const auto eb = oracle::mie_mii_exact(dense, regions, bell);
    const auto fb = singlet::mie_mii_bell(config, regions, pairing);
    const auto ez = oracle::mie_mii_exact(dense, regions, zb);
    const auto fz = singlet::mie_mii_zbasis(config, regions);
    const double dev = std::max({std::abs(eb.mie - fb.mie), std::abs(eb.mii - fb.mii),
                                 std::abs(ez.mie - fz.mie), std::abs(ez.mii - fz.mii)});
    out.push_back({"SDRG sample #" + std::to_string(t + 1) + " Bell and Z", dev <= 1e-9,
                   "Bell MII " + fmt(fb.mii) + ", Z MIE " + fmt(fz.mie) + ", max deviation " + fmt(dev)});
  }
  const int length = 64;
  double max_z = 0.0;
  double max_bell = 0.0;
  for (int t = 0; t < 2000; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t) + 1000);
    const auto config = singlet::sdrg_sample(length, rng, singlet::Boundary::periodic);
    const int r = 2 * (1 + t % 8);
    const RegionSpec two = lattice::interval_regions(length, 0, 1, 2 + r, 3 + r);
    max_z = std::max(max_z, std::abs(singlet::mie_mii_zbasis(config, two).mii));
    const RegionSpec one = lattice::interval_regions(length, 0, 0, 1 + r, 1 + r);
    const auto nn = singlet::nearest_neighbor_pairing(length, one.m, singlet::Boundary::periodic);
    max_bell = std::max(max_bell, std::abs(singlet::mie_mii_bell(config, one, nn).mie - kLn2));
  }
  out.push_back({"MII_Z = 0 on 2000 L=64 configurations", max_z == 0.0, "max |MII_Z| " + fmt(max_z)});
  out.push_back({"|A|=|B|=1 Bell MIE = ln 2 on 2000 configurations", max_bell <= 1e-12,
                 "max deviation " + fmt(max_bell)});
  return out;
}

std::vector<CheckResult> mera_suite() {
  std::vector<CheckResult> out;
  const auto graph = mera::build_mera(8);
  const int n = graph.length;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  int mismatches = 0;
  std::vector<mera::Leg> legs(static_cast<std::size_t>(n));
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int i = 0; i < n; ++i) {
      legs[i] = c % 3 == 0 ? mera::Leg::free : c % 3 == 1 ? mera::Leg::up : mera::Leg::down;
      c /= 3;
    }
    if (mera::min_cut(graph, legs) != mera::min_cut_brute_force(graph, legs)) ++mismatches;
  }
  out.push_back({"L=8 min cut vs brute force (3^8 leg patterns)", mismatches == 0,
                 std::to_string(mismatches) + " mismatches"});
  const auto big = mera::build_mera(64);
  std::vector<int> cuts;
  for (int a = 1; a <= 32; a *= 2) {
    SiteSet r;
    for (int i = 0; i < a; ++i) r.push_back(i);
    cuts.push_back(mera::region_cut(big, r));
  }
  bool monotone = std::is_sorted(cuts.begin(), cuts.end());
  std::string list;
  for (int c : cuts) list += std::to_string(c) + " ";
  out.push_back({"L=64 block cuts nondecreasing in |A|", monotone, "cuts " + list});
  return out;
}

}  // namespace

GaussianInstance random_gaussian_instance(RngStream& rng, int min_modes, int max_modes) {
  if (min_modes < 3 || max_modes < min_modes || max_modes > 14) {
    throw InvalidArgument("random_gaussian_instance: need 3 <= min_modes <= max_modes <= 14");
  }
  const int n = uniform_int(rng, min_modes, max_modes);
  while (true) {
    const int particles = uniform_int(rng, 1, n - 1);
    Eigen::MatrixXcd h = random_hermitian(rng, n);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const auto& e = es.eigenvalues();
    if (e(particles) - e(particles - 1) < 1e-3) continue;
    const double mu = 0.5 * (e(particles) + e(particles - 1));
    h -= mu * Eigen::MatrixXcd::Identity(n, n);

    const int s = uniform_int(rng, 1, n - 1);
    RegionSpec regions;
    for (int i = 0; i < n; ++i) {
      const bool to_m = rng.uniform() < 0.4;
      (to_m ? regions.m : (i < s ? regions.a : regions.b)).push_back(i);
    }
    if (regions.a.empty() || regions.b.empty() || regions.m.empty()) continue;

    auto ground = oracle::ground_state(oracle::fermion_hamiltonian(h));
    auto filled = lattice::fill_lowest(h, particles);
    return {std::move(ground.state), std::move(filled.state), std::move(regions), particles};
  }
}

bool OracleComparison::agrees(double sigmas) const {
  return std::abs(mc.mean - exact) <= sigmas * mc.stderr_mean + 1e-9;
}

OracleComparison compare_with_oracle(const GaussianInstance& inst, const estimate::SamplingOptions& options) {
  OracleComparison out;
  oracle::ProductBasis basis;
  for (int s : inst.regions.m) basis.push_back(oracle::z_frame(s));
  out.exact = oracle::mie_mii_exact(inst.dense, inst.regions, basis).mie;
  out.mc = estimate::monte_carlo_mie(inst.state, inst.regions, options);

  const auto probs = oracle::outcome_distribution(inst.dense, basis);
  const gaussian::TrajectorySampler sampler(inst.state, inst.regions.m, inst.regions.a);
  const std::size_t m = inst.regions.m.size();
  std::vector<int> outcomes(m);
  for (std::size_t code = 0; code < probs.size(); ++code) {
    for (std::size_t k = 0; k < m; ++k) outcomes[k] = static_cast<int>((code >> (m - 1 - k)) & 1U);
    double p = 0.0;
    try {
      p = std::exp(sampler.sample_forced(outcomes).log_probability);
    } catch (const NumericalError&) {
      p = 0.0;
    }
    out.max_probability_error = std::max(out.max_probability_error, std::abs(p - probs[code]));
  }
  return out;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed, int threads) {
  if (suite == "oracle") return oracle_suite(seed, threads);
  if (suite == "topo") return topo_suite(seed);
  if (suite == "rs") return rs_suite(seed);
  if (suite == "mera") return mera_suite();
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const char* s : {"oracle", "topo", "rs", "mera"}) {
      auto part = run_suite(s, seed, threads);
      for (auto& r : part) r.name = std::string(s) + ": " + r.name;
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw InvalidArgument("unknown suite '" + suite + "' (oracle, topo, rs, mera, all)");
}

int verify_command(const std::string& suite, std::uint64_t seed, int threads, std::ostream& out,
                   std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_suite(suite, seed, threads);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << r.name
        << "  " << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace mieflow::cli
