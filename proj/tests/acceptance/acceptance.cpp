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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. MIEFLOW_ACCEPTANCE_ONLY=2,6 restricts the run to a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mieflow/cli/config.hpp"
#include "mieflow/cli/experiments.hpp"
#include "mieflow/cli/verify.hpp"
#include "mieflow/fit.hpp"
#include "mieflow/lattice.hpp"
#include "mieflow/mera.hpp"
#include "mieflow/oracle.hpp"
#include "mieflow/singlet.hpp"
#include "mieflow/stabilizer.hpp"

using namespace mieflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_threads = 1;
std::uint64_t g_seed = 1;

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

struct Run {
  cli::RunResult result;
  std::map<std::string, std::string> summary;

  double num(const std::string& key) const {
    const auto it = summary.find(key);
    if (it == summary.end()) throw std::runtime_error("missing summary key " + key);
    return std::stod(it->second);
  }
};

Run run_config(const std::string& name, const std::string& body) {
  auto cfg = cli::Config::parse("schema_version = 1\nseed = " + std::to_string(g_seed) + "\n" + body,
                                "acceptance:" + name);
  cli::RunOptions opt;
  opt.threads = g_threads;
  const cli::Plan plan = cli::plan_experiment(cfg, opt);
  Run r;
  r.result = plan.execute();
  for (const auto& [k, v] : r.result.summary) r.summary[k] = v;
  return r;
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

// 1 ----------------------------------------------------------------------

Outcome oracle_equivalence() {
  RngStream rng(g_seed, 1);
  int agree = 0;
  double worst_z = 0.0;
  double worst_p = 0.0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    const auto inst = cli::random_gaussian_instance(rng, 4, 10);
    const estimate::SamplingOptions so{4000, cli::derive_seed(g_seed, 100 + i), g_threads};
    const auto cmp = cli::compare_with_oracle(inst, so);
    if (cmp.agrees(4.0) && cmp.max_probability_error <= 1e-10) ++agree;
    if (cmp.mc.stderr_mean > 0) worst_z = std::max(worst_z, std::abs(cmp.mc.mean - cmp.exact) / cmp.mc.stderr_mean);
    worst_p = std::max(worst_p, cmp.max_probability_error);
  }
  return {agree == n, std::to_string(agree) + "/" + std::to_string(n) + " instances agree, max |z| " +
                          fmt(worst_z, 3) + ", max |dp| " + fmt(worst_p, 2)};
}

// 2, 3 -------------------------------------------------------------------

struct XxFit {
  double alpha[2];
  double err[2];
  double collapse;
  double decades;
};

XxFit xx_run(double filling) {
  const auto r = run_config("xx",
                            "experiment = \"xx\"\n"
                            "n_samples = 10000\n"
                            "sizes = [64, 128]\n"
                            "filling = " + fmt(filling, 17) + "\n"
                            "interval = 2\n"
                            "separations = [1, 2, 4, 6, 8, 12, 16, 24]\n"
                            "[fit]\nkind = \"power\"\nlo = 0.005\nhi = 0.3\n");
  XxFit f{};
  const int sizes[2] = {64, 128};
  for (int i = 0; i < 2; ++i) {
    const std::string k = "alpha_L" + std::to_string(sizes[i]);
    f.alpha[i] = r.num(k + ".slope");
    f.err[i] = r.num(k + ".slope_stderr");
  }
  f.collapse = r.num("collapse.score");
  double lo = kInf;
  double hi = 0.0;
  for (const auto& s : r.result.series) {
    for (const auto& p : s.series.points) {
      if (p.abscissa >= 0.005 && p.abscissa <= 0.3) {
        lo = std::min(lo, p.abscissa);
        hi = std::max(hi, p.abscissa);
      }
    }
  }
  f.decades = std::log10(hi / lo);
  return f;
}

XxFit g_half_filling;
bool g_have_half = false;

const XxFit& half_filling() {
  if (!g_have_half) {
    g_half_filling = xx_run(0.5);
    g_have_half = true;
  }
  return g_half_filling;
}

Outcome xx_exponent() {
  const auto& f = half_filling();
  const bool ok = f.collapse < 0.05 && within(f.alpha[0], 0.3, 0.1) && within(f.alpha[1], 0.3, 0.1) &&
                  f.decades >= 1.0;
  return {ok, "alpha L64 " + fmt(f.alpha[0], 3) + " +- " + fmt(f.err[0], 2) + ", L128 " + fmt(f.alpha[1], 3) +
                  " +- " + fmt(f.err[1], 2) + ", collapse " + fmt(f.collapse, 3) + ", window " +
                  fmt(f.decades, 3) + " decades"};
}

Outcome xx_universality() {
  const auto& h = half_filling();
  const auto f = xx_run(0.375);
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    const double joint = std::hypot(h.err[i], f.err[i]);
    const double diff = std::abs(f.alpha[i] - h.alpha[i]);
    ok = ok && diff <= 2.0 * joint;
    detail += std::string(i ? ", " : "") + (i ? "L128" : "L64") + " alpha " + fmt(f.alpha[i], 3) + " vs " +
              fmt(h.alpha[i], 3) + " (|d| " + fmt(diff, 2) + ", 2 sigma " + fmt(2.0 * joint, 2) + ")";
  }
  return {ok, detail + ", collapse " + fmt(f.collapse, 3)};
}

// 4 ----------------------------------------------------------------------

Outcome random_singlets() {
  const std::string distances = "distances = [2, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256]\n";
  const auto bell = run_config("rs_bell", "experiment = \"rs\"\nbasis = \"bell\"\nL = 1024\nn_samples = 100000\n" +
                                              distances + "histogram = true\n[fit]\nlo = 8\nhi = 128\n");
  const auto z = run_config("rs_z", "experiment = \"rs\"\nbasis = \"z\"\nL = 1024\nn_samples = 100000\n" +
                                        distances + "[fit]\nkind = \"none\"\n");
  const double slope = bell.num("fit.slope");
  const double pairs = bell.num("pairs.slope");
  const double z_max = z.num("max_abs_mii");

  double bell_dev = 0.0;
  RngStream rng(g_seed, 4);
  for (int t = 0; t < 1000; ++t) {
    const int length = 1024;
    const auto config = singlet::sdrg_sample(length, rng);
    const int a = static_cast<int>(rng.uniform() * length);
    // Odd separation leaves both arcs of M with an even number of sites.
    const int b = (a + 1 + 2 * static_cast<int>(rng.uniform() * (length / 2 - 1))) % length;
    RegionSpec reg;
    reg.a = {a};
    reg.b = {b};
    for (int i = 0; i < length; ++i) {
      if (i != a && i != b) reg.m.push_back(i);
    }
    const auto pairing = singlet::nearest_neighbor_pairing(length, reg.m, singlet::Boundary::periodic);
    bell_dev = std::max(bell_dev, std::abs(singlet::mie_mii_bell(config, reg, pairing).mie - kLn2));
  }
  const bool ok = z_max == 0.0 && bell_dev <= 1e-12 && within(slope, -0.34, 0.1) && within(pairs, -2.0, 0.2);
  return {ok, "max |MII_Z| " + fmt(z_max, 2) + ", single-site Bell |MIE - ln2| " + fmt(bell_dev, 2) +
                  ", MII_Bell slope " + fmt(slope, 3) + " +- " + fmt(bell.num("fit.slope_stderr"), 2) +
                  ", pair tail slope " + fmt(pairs, 3)};
}

// 5 ----------------------------------------------------------------------

Outcome topological_constants() {
  using namespace stab;
  struct Case {
    std::vector<int> primes;
    bool string_net;
    double target;
    const char* name;
  };
  const std::vector<Case> cases = {{{2}, true, std::log(2.0), "Z2 string-net"},
                                   {{2}, false, 0.0, "Z2 MES"},
                                   {{3}, true, std::log(3.0), "Z3 string-net"},
                                   {{3}, false, 0.0, "Z3 MES"},
                                   {{2, 3}, true, std::log(6.0), "Z2xZ3 string-net"}};
  const TorusLattice lat{4, 6};
  const std::vector<std::pair<RowWindow, RowWindow>> annuli = {
      {cell_rows(0, 1), cell_rows(3, 1)}, {cell_rows(1, 1), cell_rows(3, 2)}, {cell_rows(0, 2), cell_rows(4, 1)}};
  double worst = 0.0;
  int trajectories = 0;
  std::string failed;
  for (const auto& c : cases) {
    for (std::size_t k = 0; k < annuli.size(); ++k) {
      const auto regions = annulus_regions(lat, annuli[k].first, annuli[k].second);
      for (int label = 0; label < 4; ++label) {
        std::vector<double> totals(16, 0.0);
        for (std::size_t layer = 0; layer < c.primes.size(); ++layer) {
          const int p = c.primes[layer];
          const int l1 = label % p;
          const int l2 = (label / 2) % p;
          const auto lab = c.string_net ? GroundStateLabel::string_net(l1, l2) : GroundStateLabel::mes(l1, l2);
          const auto ground = toric_ground(lat, p, lab);
          for (int s = 0; s < 16; ++s) {
            RngStream rng(cli::derive_seed(g_seed, 500 + k), static_cast<std::uint64_t>(s * 8 + layer));
            totals[s] += mie_trajectory(ground, regions, Basis::x, rng).entropy_a;
          }
        }
        for (double v : totals) {
          ++trajectories;
          const double dev = std::abs(v - c.target);
          worst = std::max(worst, dev);
          if (dev > 1e-9 && failed.empty()) failed = std::string(", first failure: ") + c.name;
        }
      }
    }
  }
  return {worst <= 1e-9, std::to_string(trajectories) + " trajectories over 5 cases x 3 annuli x 4 labels, max |MIE - target| " +
                             fmt(worst, 2) + failed};
}

// 6, 7 -------------------------------------------------------------------

Outcome chern_insulator() {
  const std::string common =
      "experiment = \"chern\"\nn_samples = 120\nL = 24\nt1 = 1\nt2 = 0.1\n"
      "distances = [2, 3, 4, 6, 8, 10, 12]\n";
  const auto top = run_config("chern_v0", common + "V = 0\n[fit]\nkind = \"power\"\nlo = 2\nhi = 12\n");
  const auto triv = run_config("chern_v08", common + "V = 0.8\n[fit]\nkind = \"exponential\"\nlo = 2\nhi = 12\n");
  const double c0 = top.num("chern_number");
  const double c8 = triv.num("chern_number");
  const double slope = top.num("fit.slope");
  const double r2 = triv.num("fit.r_squared");
  const bool ok = c0 == 1.0 && c8 == 0.0 && within(slope, -0.9, 0.15) && r2 > 0.98;
  return {ok, "C(V=0) " + fmt(c0) + ", C(V=0.8) " + fmt(c8) + ", V=0 slope " + fmt(slope, 3) + " +- " +
                  fmt(top.num("fit.slope_stderr"), 2) + ", V=0.8 log-linear r^2 " + fmt(r2, 4) +
                  " (decay length " + fmt(triv.num("fit.decay_length"), 3) + ")"};
}

Outcome metal() {
  const auto r = run_config("metal",
                            "experiment = \"metal\"\nn_samples = 120\nL = 32\n"
                            "distances = [2, 3, 4, 6, 8, 10, 12, 14, 16]\n"
                            "[fit]\nkind = \"power\"\nlo = 2\nhi = 16\n");
  const double slope = r.num("fit.slope");
  return {within(slope, -0.23, 0.1), "slope " + fmt(slope, 3) + " +- " + fmt(r.num("fit.slope_stderr"), 2) +
                                         ", r^2 " + fmt(r.num("fit.r_squared"), 4)};
}

// 8 ----------------------------------------------------------------------

SiteSet block(int first, int size, int length) {
  SiteSet s;
  for (int i = 0; i < size; ++i) s.push_back((first + i) % length);
  return s;
}

Outcome mera_geometry() {
  using namespace mera;
  // Exhaustive max-flow check on every boundary pattern at L = 8.
  const auto g8 = build_mera(8);
  int mismatches = 0;
  for (int code = 0; code < 6561; ++code) {
    std::vector<Leg> legs(8);
    int c = code;
    for (auto& l : legs) {
      l = static_cast<Leg>(c % 3);
      c /= 3;
    }
    if (min_cut(g8, legs) != min_cut_brute_force(g8, legs)) ++mismatches;
  }

  // Offset-averaged S(A) against ln|A|.
  std::vector<double> slopes;
  for (int length : {64, 128, 256}) {
    const auto g = build_mera(length);
    std::vector<double> x;
    std::vector<double> y;
    for (int a = 2; a <= length / 4; a *= 2) {
      double s = 0.0;
      for (int o = 0; o < length; ++o) s += region_cut(g, block(o, a, length));
      x.push_back(std::log(a));
      y.push_back(s / length);
    }
    slopes.push_back(fit::fit_line(x, y).slope);
  }
  bool stable = true;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    stable = stable && slopes[i] > 0.0;
    if (i > 0) stable = stable && std::abs(slopes[i] - slopes[i - 1]) <= 0.1 * slopes[i - 1];
  }

  // Mutual information regimes on either side of eta~ = 1.
  const int lm = 256;
  const auto gm = build_mera(lm);
  int regime_errors = 0;
  int small = 0;
  int large = 0;
  for (int la : {8, 16, 32}) {
    for (int f0 = 0; f0 < la; ++f0) {
      for (int d = 1; f0 + 2 * la + d < lm; ++d) {
        const Interval a{f0, f0 + la - 1};
        const Interval b{f0 + la + d, f0 + 2 * la + d - 1};
        const double et = lattice::interval_cross_ratio(lm, a.first, a.last, b.first, b.last, true).eta_tilde;
        if (et > 0.25 && et < 4.0) continue;
        const auto m = mutual_info_large_d(gm, a, b, 8.0);
        const bool connected = m.f_connected < m.f_a + m.f_b;
        if (et <= 0.25) {
          ++small;
          if (connected || m.mutual_information > kLn2) ++regime_errors;
        } else {
          ++large;
          if (!connected || m.mutual_information < 8.0) ++regime_errors;
        }
      }
    }
  }

  // MIE against min(S_A, S_B) on dyadic placements separated by at least
  // the larger block, symmetric and asymmetric sizes.
  int eq_total = 0;
  int eq_fail = 0;
  int sym = 0;
  int asym = 0;
  for (int length : {64, 128}) {
    const auto g = build_mera(length);
    for (int la = 1; la <= length / 4; la *= 2) {
      for (int lb = 1; lb <= length / 4; lb *= 2) {
        for (int fa = 0; fa + la <= length; fa += la) {
          for (int fb = fa + la; fb + lb <= length; fb += lb) {
            const int gap = fb - fa - la;
            const int other = length - fb - lb + fa;
            if (std::min(gap, other) < std::max(la, lb)) continue;
            const auto a = block(fa, la, length);
            const auto b = block(fb, lb, length);
            const double m = mie_large_d(g, a, b, 1.0);
            ++eq_total;
            (la == lb ? sym : asym)++;
            if (m != std::min(region_cut(g, a), region_cut(g, b))) ++eq_fail;
          }
        }
      }
    }
  }
  const bool ok = mismatches == 0 && stable && regime_errors == 0 && small > 0 && large > 0 && eq_fail == 0;
  return {ok, "L=8 cut mismatches " + std::to_string(mismatches) + "/6561, S(A) slopes " + fmt(slopes[0], 3) + ", " +
                  fmt(slopes[1], 3) + ", " + fmt(slopes[2], 3) + ", regime errors " +
                  std::to_string(regime_errors) + "/" + std::to_string(small + large) + ", MIE != min(S_A,S_B) on " +
                  std::to_string(eq_fail) + "/" + std::to_string(eq_total) + " placements (" + std::to_string(sym) +
                  " symmetric, " + std::to_string(asym) + " asymmetric)"};
}

// 9 ----------------------------------------------------------------------

Outcome strange_correlator_bound() {
  RngStream rng(g_seed, 9);
  auto cplx_uniform = [&] { return cplx(rng.uniform() - 0.5, rng.uniform() - 0.5); };
  int violations = 0;
  int informative = 0;
  double min_margin = kInf;
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng.uniform() * 6);
    Eigen::VectorXcd amps(1 << n);
    for (auto& x : amps) x = cplx_uniform();
    const auto psi = oracle::StateVector::qubits(amps.normalized());
    const int na = n >= 5 && rng.uniform() < 0.5 ? 2 : 1;
    const int nb = n >= 6 && rng.uniform() < 0.5 ? 2 : 1;
    RegionSpec reg;
    for (int i = 0; i < na; ++i) reg.a.push_back(i);
    for (int i = 0; i < nb; ++i) reg.b.push_back(n - nb + i);
    oracle::ProductBasis basis;
    for (int i = na; i < n - nb; ++i) {
      reg.m.push_back(i);
      basis.push_back(rng.uniform() < 0.5 ? oracle::z_frame(i) : oracle::x_frame(i));
    }
    auto vec = [&](int k) {
      Eigen::VectorXcd v(1 << k);
      for (auto& x : v) x = cplx_uniform();
      return v;
    };
    auto mat = [&](int k) {
      Eigen::MatrixXcd m(1 << k, 1 << k);
      for (auto& x : m.reshaped()) x = cplx_uniform();
      return m;
    };
    const auto rep = oracle::check_sc_bound(psi, reg, basis, vec(na), vec(nb), mat(na), mat(nb));
    if (!rep.holds()) ++violations;
    if (!rep.degenerate && rep.bound > 0.0) {
      ++informative;
      min_margin = std::min(min_margin, rep.mie - rep.bound);
    }
  }
  return {violations == 0 && informative > 0, std::to_string(violations) + " violations over 50 instances (" +
                                                  std::to_string(informative) + " with a positive bound, min margin " +
                                                  fmt(min_margin, 3) + ")"};
}

}  // namespace

int main() {
  g_threads = estimate::default_threads();
  if (const char* s = std::getenv("MIEFLOW_ACCEPTANCE_SEED")) g_seed = std::strtoull(s, nullptr, 10);
  std::set<int> only;
  if (const char* s = std::getenv("MIEFLOW_ACCEPTANCE_ONLY")) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
  }

  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 120, oracle_equivalence},
      {2, "XX chain exponent", 3600, xx_exponent},
      {3, "XX universality in filling", 3600, xx_universality},
      {4, "random singlets", 1800, random_singlets},
      {5, "topological constants", 300, topological_constants},
      {6, "Chern insulator", 7200, chern_insulator},
      {7, "metal", 7200, metal},
      {8, "MERA geometry", 300, mera_geometry},
      {9, "strange-correlator bound", 300, strange_correlator_bound},
  };

  std::printf("acceptance: seed %llu, %d thread(s)\n", static_cast<unsigned long long>(g_seed), g_threads);
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += ", over the " + fmt(c.budget_s, 5) + " s budget";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("acceptance: %d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
