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

#include "mieflow/cli/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "mieflow/cli/verify.hpp"
#include "mieflow/lattice.hpp"
#include "mieflow/mera.hpp"
#include "mieflow/singlet.hpp"
#include "mieflow/stabilizer.hpp"

#ifndef MIEFLOW_VERSION
#define MIEFLOW_VERSION "unknown"
#endif
#ifndef MIEFLOW_GIT_REVISION
#define MIEFLOW_GIT_REVISION "unknown"
#endif

namespace mieflow::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
auto guarded(const Config& cfg, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    cfg.fail(key, e.what());
  }
}

std::string join(const std::vector<long long>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

struct Common {
  FitKind fit = FitKind::none;
  fit::Window window;
};

// Reads the keys shared by every experiment into `plan`.
Common read_common(Config& cfg, const RunOptions& opt, Plan& plan, std::int64_t default_samples,
                   FitKind default_fit) {
  const long long seed = cfg.get_int("seed", 0);
  if (seed < 0) cfg.fail("seed", "must be nonnegative");
  plan.seed = opt.seed ? *opt.seed : static_cast<std::uint64_t>(seed);

  const long long threads = cfg.get_int("threads", 0);
  if (threads < 0) cfg.fail("threads", "must be nonnegative (0 = machine parallelism)");
  if (opt.threads) {
    plan.threads = *opt.threads;
  } else if (const char* env = std::getenv("MIEFLOW_THREADS"); env && std::atoi(env) > 0) {
    plan.threads = std::atoi(env);
  } else if (threads > 0) {
    plan.threads = static_cast<int>(threads);
  } else {
    plan.threads = estimate::default_threads();
  }
  if (plan.threads < 1) throw ConfigError(cfg.file(), 0, "thread count must be at least 1");

  plan.n_samples = cfg.get_int("n_samples", default_samples);
  if (plan.n_samples < 1) cfg.fail("n_samples", "must be at least 1");

  Common c;
  const std::string kind = cfg.get_string("fit.kind", std::string(fit_kind_name(default_fit)));
  c.fit = guarded(cfg, "fit.kind", [&] { return parse_fit_kind(kind); });
  c.window.lo = cfg.get_double("fit.lo", -kInf);
  c.window.hi = cfg.get_double("fit.hi", kInf);
  if (!(c.window.lo < c.window.hi)) cfg.fail("fit.hi", "fit window must satisfy lo < hi");

  plan.name = cfg.get_string("output.name", plan.experiment);
  if (plan.name.empty() || plan.name.find('/') != std::string::npos) {
    cfg.fail("output.name", "must be a nonempty file stem without '/'");
  }
  const std::string dir = cfg.get_string("output.dir", "out");
  plan.out_dir = opt.out_dir ? *opt.out_dir : dir;
  plan.svg = cfg.get_bool("output.svg", false) || opt.svg;
  return c;
}

void check_window(const Config& cfg, const Common& c, const std::vector<double>& abscissas,
                  const std::string& key = "fit.lo") {
  if (c.fit == FitKind::none) return;
  const auto n = std::count_if(abscissas.begin(), abscissas.end(),
                               [&](double x) { return c.window.contains(x); });
  if (n < 3) cfg.fail(key, "fit window contains fewer than 3 points");
}

void check_distinct(const Config& cfg, const std::string& key, std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    cfg.fail(key, "points must have distinct abscissas");
  }
}

SeriesOutput make_output(std::string name, std::string x, std::string y, estimate::SeriesResult s,
                         const Common& c, KeyValues provenance = {}) {
  SeriesOutput out;
  out.name = std::move(name);
  out.x_label = std::move(x);
  out.y_label = std::move(y);
  out.series = std::move(s);
  out.fit = apply_fit(out.series, c.fit, c.window);
  out.provenance = std::move(provenance);
  return out;
}

void add_fit_summary(KeyValues& summary, const std::string& prefix, const SeriesOutput& s) {
  if (!s.fit) return;
  summary.emplace_back(prefix + ".slope", format_double(s.fit->line.slope));
  summary.emplace_back(prefix + ".slope_stderr", format_double(s.fit->line.slope_stderr));
  summary.emplace_back(prefix + ".r_squared", format_double(s.fit->line.r_squared));
  if (s.fit->kind == FitKind::exponential && s.fit->line.slope < 0.0) {
    summary.emplace_back(prefix + ".decay_length", format_double(-1.0 / s.fit->line.slope));
  }
}

// ---------------------------------------------------------------------------

void plan_xx(Config& cfg, const RunOptions& opt, Plan& plan) {
  const Common c = read_common(cfg, opt, plan, 10000, FitKind::power);
  if (cfg.has("L") && cfg.has("sizes")) cfg.fail("sizes", "give either L or sizes");
  const std::string size_key = cfg.has("sizes") ? "sizes" : "L";
  const std::vector<long long> sizes =
      cfg.has("sizes") ? cfg.get_int_list("sizes") : std::vector<long long>{cfg.get_int("L", 64)};
  if (sizes.empty()) cfg.fail(size_key, "must not be empty");
  if (cfg.has("mu") && cfg.has("filling")) cfg.fail("mu", "give either filling or mu");
  double filling = 0.5;
  if (cfg.has("mu")) {
    const double mu = cfg.get_double("mu");
    filling = guarded(cfg, "mu", [&] { return lattice::filling_from_chemical_potential(mu); });
  } else {
    filling = cfg.get_double("filling", 0.5);
  }
  if (!(filling > 0.0 && filling < 1.0)) cfg.fail("filling", "must lie in (0, 1)");
  const long long interval = cfg.get_int("interval", 2);
  const bool chord = cfg.get_bool("chord", true);
  if (cfg.has("eta") && cfg.has("separations")) cfg.fail("eta", "give either eta or separations");
  const bool by_eta = cfg.has("eta");
  const std::string point_key = by_eta ? "eta" : "separations";
  std::vector<double> targets;
  std::vector<long long> seps;
  if (by_eta) {
    targets = cfg.get_double_list("eta");
    for (double t : targets) {
      if (!(t > 0.0 && t < 1.0)) cfg.fail("eta", "targets must lie in (0, 1)");
    }
  } else {
    seps = cfg.get_int_list("separations");
  }
  if (targets.empty() && seps.empty()) cfg.fail(point_key, "give at least one point");
  const double threshold = cfg.get_double("collapse.threshold", 0.05);
  const long long grid = cfg.get_int("collapse.grid", 32);
  if (grid < 2) cfg.fail("collapse.grid", "must be at least 2");

  struct Point {
    double eta;
    long long d;
    RegionSpec regions;
  };
  struct Size {
    int length;
    int l;
    std::vector<Point> points;
  };
  std::vector<Size> plan_sizes;
  const long long l0 = sizes.front();
  for (long long length : sizes) {
    if (length < 4 || length % 2 != 0 || length > 100000) {
      cfg.fail(size_key, "chain length must be even and in [4, 100000]");
    }
    if ((interval * length) % l0 != 0) {
      cfg.fail("interval", "interval does not scale to L = " + std::to_string(length));
    }
    const long long l = interval * length / l0;
    if (l < 1 || 2 * l + 1 >= length) cfg.fail("interval", "interval does not fit the chain");
    Size s{static_cast<int>(length), static_cast<int>(l), {}};
    auto eta_of = [&](long long d) {
      return lattice::interval_cross_ratio(s.length, 0, s.l - 1, s.l + d, 2 * s.l + d - 1, chord).eta;
    };
    auto add = [&](long long d) {
      if (d < 1 || 2 * l + d > length - 1) {
        cfg.fail(point_key, "separation " + std::to_string(d) + " does not fit on L = " +
                                std::to_string(length));
      }
      s.points.push_back({eta_of(d), d,
                          guarded(cfg, point_key, [&] {
                            return lattice::interval_regions(s.length, 0, s.l - 1, s.l + d, 2 * s.l + d - 1);
                          })});
    };
    if (by_eta) {
      for (double t : targets) {
        long long best = 1;
        double err = kInf;
        for (long long d = 1; 2 * l + d <= length - 1; ++d) {
          const double e = std::abs(std::log(eta_of(d)) - std::log(t));
          if (e < err) {
            err = e;
            best = d;
          }
        }
        add(best);
      }
    } else {
      for (long long d : seps) {
        if ((d * length) % l0 != 0) {
          cfg.fail("separations", "separation does not scale to L = " + std::to_string(length));
        }
        add(d * length / l0);
      }
    }
    std::vector<double> etas;
    for (const auto& p : s.points) etas.push_back(p.eta);
    check_distinct(cfg, point_key, etas);
    check_window(cfg, c, etas);
    plan_sizes.push_back(std::move(s));
  }

  plan.settings = {{"filling", format_double(filling)},
                   {"sizes", join(sizes)},
                   {"interval", std::to_string(interval)},
                   {"chord", chord ? "true" : "false"}};
  const Plan p = plan;
  plan.execute = [p, c, plan_sizes, filling, threshold, grid]() {
    RunResult out;
    std::vector<estimate::SeriesResult> all;
    for (std::size_t si = 0; si < plan_sizes.size(); ++si) {
      const Size& s = plan_sizes[si];
      const auto state = lattice::xx_chain_state(s.length, filling);
      estimate::SeriesResult series;
      std::vector<long long> ds;
      for (std::size_t pi = 0; pi < s.points.size(); ++pi) {
        const estimate::SamplingOptions so{p.n_samples, derive_seed(p.seed, si * 4096 + pi), p.threads};
        series.add(s.points[pi].eta, estimate::monte_carlo_mie(state, s.points[pi].regions, so));
        ds.push_back(s.points[pi].d);
      }
      all.push_back(series);
      const std::string name = p.name + "_L" + std::to_string(s.length);
      out.series.push_back(make_output(name, "eta", "MIE", series, c,
                                       {{"L", std::to_string(s.length)},
                                        {"interval", std::to_string(s.l)},
                                        {"separations", join(ds)}}));
      add_fit_summary(out.summary, "alpha_L" + std::to_string(s.length), out.series.back());
    }
    if (all.size() >= 2) {
      const double score = fit::data_collapse(all, static_cast<int>(grid));
      out.summary.emplace_back("collapse.score", format_double(score));
      out.summary.emplace_back("collapse.threshold", format_double(threshold));
      out.summary.emplace_back("collapse.pass", score < threshold ? "true" : "false");
    }
    return out;
  };
}

// ---------------------------------------------------------------------------

struct CylinderSetup {
  lattice::CylinderGeometry geom;
  int width = 2;
  std::vector<long long> distances;
  std::vector<RegionSpec> regions;
};

CylinderSetup read_cylinder(Config& cfg, const Common& c, int orbitals, bool default_antiperiodic) {
  CylinderSetup s;
  const long long l = cfg.get_int("L", 24);
  const long long lx = cfg.get_int("lx", l);
  const long long ly = cfg.get_int("ly", l);
  if (lx < 4 || ly < 4 || lx > 256 || ly > 256) cfg.fail("L", "cylinder sides must lie in [4, 256]");
  s.geom.lx = static_cast<int>(lx);
  s.geom.ly = static_cast<int>(ly);
  s.geom.x_twist = cfg.get_bool("antiperiodic_x", default_antiperiodic) ? std::numbers::pi : 0.0;
  const long long width = cfg.get_int("width", 2);
  if (width < 1) cfg.fail("width", "must be at least 1");
  s.width = static_cast<int>(width);
  s.distances = cfg.get_int_list("distances");
  if (s.distances.empty()) cfg.fail("distances", "give at least one distance");
  std::vector<double> xs;
  for (long long r : s.distances) {
    if (r < 1 || r > s.geom.ly) cfg.fail("distances", "distances must lie in [1, ly]");
    s.regions.push_back(guarded(cfg, "distances", [&] {
      return lattice::ring_regions(s.geom, orbitals, s.width, static_cast<int>(r));
    }));
    xs.push_back(static_cast<double>(r));
  }
  check_distinct(cfg, "distances", xs);
  check_window(cfg, c, xs);
  return s;
}

estimate::SeriesResult ring_series(const Plan& p, const gaussian::GaussianState& state,
                                   const CylinderSetup& s) {
  estimate::SeriesResult series;
  for (std::size_t i = 0; i < s.regions.size(); ++i) {
    const estimate::SamplingOptions so{p.n_samples, derive_seed(p.seed, i), p.threads};
    series.add(static_cast<double>(s.distances[i]), estimate::monte_carlo_mie(state, s.regions[i], so));
  }
  return series;
}

void plan_chern(Config& cfg, const RunOptions& opt, Plan& plan) {
  const Common c = read_common(cfg, opt, plan, 120, FitKind::power);
  const double t1 = cfg.get_double("t1", 1.0);
  const double t2 = cfg.get_double("t2", 0.1);
  const double v = cfg.get_double("V", 0.0);
  if (!(t1 > 0.0)) cfg.fail("t1", "must be positive");
  const long long grid = cfg.get_int("chern_grid", 24);
  if (grid < 4) cfg.fail("chern_grid", "must be at least 4");
  const CylinderSetup s = read_cylinder(cfg, c, 2, true);
  plan.settings = {{"t1", format_double(t1)},
                   {"t2", format_double(t2)},
                   {"V", format_double(v)},
                   {"lx", std::to_string(s.geom.lx)},
                   {"ly", std::to_string(s.geom.ly)},
                   {"x_twist", format_double(s.geom.x_twist)},
                   {"width", std::to_string(s.width)}};
  const Plan p = plan;
  plan.execute = [p, c, s, t1, t2, v, grid]() {
    RunResult out;
    const int chern = lattice::chern_number(t1, t2, v, static_cast<int>(grid));
    const auto filled = lattice::chern_state(s.geom, t1, t2, v);
    out.series.push_back(make_output(p.name, "r", "MIE", ring_series(p, filled.state, s), c,
                                     {{"distances", join(s.distances)}}));
    out.summary.emplace_back("chern_number", std::to_string(chern));
    out.summary.emplace_back("gap", format_double(filled.gap));
    out.summary.emplace_back("shell_degeneracy", std::to_string(filled.shell_degeneracy));
    add_fit_summary(out.summary, "fit", out.series.back());
    return out;
  };
}

void plan_metal(Config& cfg, const RunOptions& opt, Plan& plan) {
  const Common c = read_common(cfg, opt, plan, 120, FitKind::power);
  const CylinderSetup s = read_cylinder(cfg, c, 1, false);
  plan.settings = {{"lx", std::to_string(s.geom.lx)},
                   {"ly", std::to_string(s.geom.ly)},
                   {"x_twist", format_double(s.geom.x_twist)},
                   {"width", std::to_string(s.width)}};
  const Plan p = plan;
  plan.execute = [p, c, s]() {
    RunResult out;
    const auto filled = lattice::metal_state(s.geom);
    out.series.push_back(make_output(p.name, "r", "MIE", ring_series(p, filled.state, s), c,
                                     {{"distances", join(s.distances)}}));
    out.summary.emplace_back("gap", format_double(filled.gap));
    out.summary.emplace_back("shell_degeneracy", std::to_string(filled.shell_degeneracy));
    add_fit_summary(out.summary, "fit", out.series.back());
    if (out.series.back().fit && c.fit == FitKind::power) {
      // eta ~ r^-2 at large separation.
      out.summary.emplace_back("alpha_from_r", format_double(-out.series.back().fit->line.slope / 2.0));
    }
    return out;
  };
}

// ---------------------------------------------------------------------------

void plan_rs(Config& cfg, const RunOptions& opt, Plan& plan) {
  const std::string basis = cfg.get_string("basis", "bell");
  if (basis != "bell" && basis != "z") cfg.fail("basis", "must be \"bell\" or \"z\"");
  const Common c = read_common(cfg, opt, plan, 10000, basis == "bell" ? FitKind::power : FitKind::none);
  if (basis == "z" && c.fit != FitKind::none) {
    cfg.fail("fit.kind", "Z-basis MII vanishes identically; use fit.kind = \"none\"");
  }
  const long long length = cfg.get_int("L", 1024);
  if (length < 4 || length % 2 != 0 || length > 10000000) cfg.fail("L", "must be even and >= 4");
  const std::string bname = cfg.get_string("boundary", "periodic");
  if (bname != "periodic" && bname != "open") cfg.fail("boundary", "must be \"periodic\" or \"open\"");
  const auto boundary = bname == "periodic" ? singlet::Boundary::periodic : singlet::Boundary::open;
  const long long interval = cfg.get_int("interval", 2);
  if (interval < 1) cfg.fail("interval", "must be at least 1");
  const std::vector<long long> distances = cfg.get_int_list("distances");
  if (distances.empty()) cfg.fail("distances", "give at least one distance");
  const bool histogram = cfg.get_bool("histogram", false);
  fit::Window hwin{cfg.get_double("histogram.fit.lo", 8.0), cfg.get_double("histogram.fit.hi", 128.0)};
  if (!(hwin.lo < hwin.hi)) cfg.fail("histogram.fit.hi", "fit window must satisfy lo < hi");

  std::vector<RegionSpec> regions;
  std::vector<singlet::BellPairing> pairings;
  std::vector<double> xs;
  for (long long r : distances) {
    if (r < 1 || 2 * interval + r >= length) cfg.fail("distances", "A, gap and B must fit on the chain");
    RegionSpec reg = guarded(cfg, "distances", [&] {
      return lattice::interval_regions(static_cast<int>(length), 0, static_cast<int>(interval - 1),
                                       static_cast<int>(interval + r),
                                       static_cast<int>(2 * interval + r - 1));
    });
    if (basis == "bell") {
      pairings.push_back(guarded(cfg, "distances", [&] {
        return singlet::nearest_neighbor_pairing(static_cast<int>(length), reg.m, boundary);
      }));
    }
    regions.push_back(std::move(reg));
    xs.push_back(static_cast<double>(r));
  }
  check_distinct(cfg, "distances", xs);
  check_window(cfg, c, xs);
  plan.settings = {{"L", std::to_string(length)},
                   {"interval", std::to_string(interval)},
                   {"basis", basis},
                   {"boundary", bname}};
  const Plan p = plan;
  plan.execute = [p, c, regions, pairings, distances, length, boundary, basis, histogram, hwin]() {
    const std::size_t nr = regions.size();
    const auto n = static_cast<std::size_t>(p.n_samples);
    std::vector<std::vector<double>> values(nr, std::vector<double>(n));
    std::vector<std::vector<long long>> counts(histogram ? n : 0);
    const std::uint64_t seed = derive_seed(p.seed, 0);
    estimate::parallel_for(p.n_samples, p.threads, [&](std::int64_t t) {
      RngStream rng(seed, static_cast<std::uint64_t>(t));
      const auto config = singlet::sdrg_sample(static_cast<int>(length), rng, boundary);
      for (std::size_t k = 0; k < nr; ++k) {
        values[k][static_cast<std::size_t>(t)] =
            basis == "bell" ? singlet::mie_mii_bell(config, regions[k], pairings[k]).mii
                            : singlet::mie_mii_zbasis(config, regions[k]).mii;
      }
      if (histogram) {
        fit::add_octave_counts(singlet::pair_distances(config, boundary),
                               counts[static_cast<std::size_t>(t)]);
      }
    });
    RunResult out;
    estimate::SeriesResult series;
    double max_abs = 0.0;
    for (std::size_t k = 0; k < nr; ++k) {
      for (double x : values[k]) max_abs = std::max(max_abs, std::abs(x));
      series.add(static_cast<double>(distances[k]), estimate::summarize(std::move(values[k])));
    }
    out.series.push_back(make_output(p.name, "r", "MII", series, c, {{"distances", join(distances)}}));
    add_fit_summary(out.summary, "fit", out.series.back());
    out.summary.emplace_back("max_abs_mii", format_double(max_abs));
    if (histogram) {
      std::vector<long long> total;
      for (const auto& row : counts) {
        if (total.size() < row.size()) total.resize(row.size(), 0);
        for (std::size_t b = 0; b < row.size(); ++b) total[b] += row[b];
      }
      const auto density = fit::octave_density(total, static_cast<double>(p.n_samples));
      Common hc;
      hc.fit = FitKind::power;
      hc.window = hwin;
      out.series.push_back(make_output(p.name + "_pairs", "pair distance", "density", density, hc));
      add_fit_summary(out.summary, "pairs", out.series.back());
    }
    return out;
  };
}

// ---------------------------------------------------------------------------

void plan_topological(Config& cfg, const RunOptions& opt, Plan& plan, bool stacked) {
  const Common c = read_common(cfg, opt, plan, 16, FitKind::none);
  if (c.fit != FitKind::none) cfg.fail("fit.kind", "topological runs produce a single value");
  const long long l1 = cfg.get_int("l1", 4);
  const long long l2 = cfg.get_int("l2", 4);
  if (l1 < 2 || l2 < 2 || l1 * l2 > 4096) cfg.fail("l1", "torus sides must be >= 2 with l1*l2 <= 4096");
  const stab::TorusLattice lat{static_cast<int>(l1), static_cast<int>(l2)};
  const std::vector<long long> primes =
      stacked ? cfg.get_int_list("p", std::vector<long long>{3}) : std::vector<long long>{cfg.get_int("p", 2)};
  if (primes.empty()) cfg.fail("p", "give at least one prime");
  for (long long q : primes) {
    if (q > 97 || !stab::is_prime(static_cast<int>(q))) cfg.fail("p", "entries must be primes <= 97");
  }
  const std::string kind = cfg.get_string("state", "string_net");
  if (kind != "string_net" && kind != "mes") cfg.fail("state", "must be \"string_net\" or \"mes\"");
  const std::vector<long long> labels = cfg.get_int_list("labels", std::vector<long long>{0, 0});
  if (labels.size() != 2) cfg.fail("labels", "expected two entries");
  for (long long q : primes) {
    if (labels[0] < 0 || labels[1] < 0 || labels[0] >= q || labels[1] >= q) {
      cfg.fail("labels", "labels must lie in [0, p) for every p");
    }
  }
  const std::string basis_name = cfg.get_string("basis", "x");
  if (basis_name != "x" && basis_name != "z") cfg.fail("basis", "must be \"x\" or \"z\"");
  const std::vector<long long> m1 = cfg.get_int_list("m1", std::vector<long long>{0, 1});
  const std::vector<long long> m2 = cfg.get_int_list("m2", std::vector<long long>{l2 / 2, 1});
  if (m1.size() != 2) cfg.fail("m1", "expected [first_row, rows]");
  if (m2.size() != 2) cfg.fail("m2", "expected [first_row, rows]");
  const RegionSpec regions = guarded(cfg, "m1", [&] {
    return stab::annulus_regions(lat, stab::cell_rows(static_cast<int>(m1[0]), static_cast<int>(m1[1])),
                                 stab::cell_rows(static_cast<int>(m2[0]), static_cast<int>(m2[1])));
  });
  const stab::GroundStateLabel label =
      kind == "mes" ? stab::GroundStateLabel::mes(static_cast<int>(labels[0]), static_cast<int>(labels[1]))
                    : stab::GroundStateLabel::string_net(static_cast<int>(labels[0]),
                                                         static_cast<int>(labels[1]));
  const stab::Basis basis = basis_name == "x" ? stab::Basis::x : stab::Basis::z;
  plan.settings = {{"l1", std::to_string(l1)},   {"l2", std::to_string(l2)}, {"p", join(primes)},
                   {"state", kind},               {"labels", join(labels)},  {"basis", basis_name},
                   {"m1", join(m1)},              {"m2", join(m2)}};
  const Plan p = plan;
  plan.execute = [p, lat, primes, label, basis, regions]() {
    const auto n = static_cast<std::size_t>(p.n_samples);
    std::vector<double> totals(n, 0.0);
    double log_d = 0.0;
    for (std::size_t layer = 0; layer < primes.size(); ++layer) {
      const int q = static_cast<int>(primes[layer]);
      log_d += std::log(static_cast<double>(q));
      const auto ground = stab::toric_ground(lat, q, label);
      const std::uint64_t seed = derive_seed(p.seed, layer);
      estimate::parallel_for(p.n_samples, p.threads, [&](std::int64_t t) {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        totals[static_cast<std::size_t>(t)] += stab::mie_trajectory(ground, regions, basis, rng).entropy_a;
      });
    }
    const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
    const double min_v = *lo;
    const double max_v = *hi;
    RunResult out;
    estimate::SeriesResult series;
    double dim = 1.0;
    for (long long q : primes) dim *= static_cast<double>(q);
    series.add(dim, estimate::summarize(totals));
    Common none;
    out.series.push_back(make_output(p.name, "D", "MIE", series, none));
    out.summary.emplace_back("log_D", format_double(log_d));
    out.summary.emplace_back("mie_min", format_double(min_v));
    out.summary.emplace_back("mie_max", format_double(max_v));
    out.summary.emplace_back("outcome_independent", max_v - min_v <= 1e-12 ? "true" : "false");
    return out;
  };
}

// ---------------------------------------------------------------------------

void plan_mera(Config& cfg, const RunOptions& opt, Plan& plan) {
  const std::string mode = cfg.get_string("mode", "entropy");
  if (mode != "entropy" && mode != "mutual_info" && mode != "mie") {
    cfg.fail("mode", "must be \"entropy\", \"mutual_info\" or \"mie\"");
  }
  const Common c = read_common(cfg, opt, plan, 1, mode == "entropy" ? FitKind::log : FitKind::none);
  const long long length = cfg.get_int("L", 64);
  if (length < 4 || length > (1 << 16) || (length & (length - 1)) != 0) {
    cfg.fail("L", "must be a power of two in [4, 65536]");
  }
  const double log_d = cfg.get_double("logD", 1.0);
  if (!(log_d > 0.0)) cfg.fail("logD", "must be positive");
  struct Query {
    double x;
    SiteSet a;
    SiteSet b;
    mera::Interval ia;
    mera::Interval ib;
  };
  std::vector<Query> queries;
  std::string x_label;
  std::string y_label;
  auto range = [](long long first, long long count) {
    SiteSet s;
    for (long long i = 0; i < count; ++i) s.push_back(static_cast<int>(first + i));
    return s;
  };
  if (mode == "entropy") {
    std::vector<long long> def;
    for (long long a = 1; a <= length / 2; a *= 2) def.push_back(a);
    const auto sizes = cfg.get_int_list("sizes", def);
    const long long offset = cfg.get_int("offset", 0);
    for (long long a : sizes) {
      if (a < 1 || offset < 0 || offset + a > length) cfg.fail("sizes", "region must fit on the boundary");
      queries.push_back({static_cast<double>(a), range(offset, a), {}, {}, {}});
    }
    x_label = "|A|";
    y_label = "S(A)";
  } else {
    const long long la = cfg.get_int("interval", 4);
    const long long lb = mode == "mie" ? cfg.get_int("interval_b", la) : la;
    const auto seps = cfg.get_int_list("separations");
    if (la < 1 || lb < 1) cfg.fail("interval", "must be at least 1");
    for (long long d : seps) {
      if (d < 1 || la + lb + d >= length) cfg.fail("separations", "A, gap and B must fit on the boundary");
      Query q;
      q.a = range(0, la);
      q.b = range(la + d, lb);
      q.ia = {0, static_cast<int>(la - 1)};
      q.ib = {static_cast<int>(la + d), static_cast<int>(la + d + lb - 1)};
      q.x = mode == "mie" ? static_cast<double>(d)
                          : lattice::interval_cross_ratio(static_cast<int>(length), q.ia.first, q.ia.last,
                                                          q.ib.first, q.ib.last, true)
                                .eta_tilde;
      queries.push_back(std::move(q));
    }
    x_label = mode == "mie" ? "separation" : "eta_tilde";
    y_label = mode == "mie" ? "MIE" : "I(A,B)";
  }
  if (queries.empty()) cfg.fail(mode == "entropy" ? "sizes" : "separations", "give at least one point");
  std::vector<double> xs;
  for (const auto& q : queries) xs.push_back(q.x);
  check_distinct(cfg, mode == "entropy" ? "sizes" : "separations", xs);
  check_window(cfg, c, xs);
  plan.settings = {{"L", std::to_string(length)}, {"logD", format_double(log_d)}, {"mode", mode}};
  const Plan p = plan;
  plan.execute = [p, c, queries, length, log_d, mode, x_label, y_label]() {
    const auto graph = mera::build_mera(static_cast<int>(length));
    estimate::SeriesResult series;
    for (const auto& q : queries) {
      double v = 0.0;
      if (mode == "entropy") {
        v = log_d * mera::region_cut(graph, q.a);
      } else if (mode == "mie") {
        v = mera::mie_large_d(graph, q.a, q.b, log_d);
      } else {
        v = mera::mutual_info_large_d(graph, q.ia, q.ib, log_d).mutual_information;
      }
      estimate::EstimatorResult e;
      e.mean = v;
      e.n_samples = 1;
      series.add(q.x, e);
    }
    RunResult out;
    out.series.push_back(make_output(p.name, x_label, y_label, series, c));
    add_fit_summary(out.summary, "fit", out.series.back());
    return out;
  };
}

// ---------------------------------------------------------------------------

void plan_oracle_check(Config& cfg, const RunOptions& opt, Plan& plan) {
  const Common c = read_common(cfg, opt, plan, 10000, FitKind::none);
  if (c.fit != FitKind::none) cfg.fail("fit.kind", "oracle-check does not fit");
  const long long instances = cfg.get_int("n_instances", 20);
  const long long max_modes = cfg.get_int("max_modes", 10);
  if (instances < 1) cfg.fail("n_instances", "must be at least 1");
  if (max_modes < 4 || max_modes > 12) cfg.fail("max_modes", "must lie in [4, 12]");
  plan.settings = {{"n_instances", std::to_string(instances)}, {"max_modes", std::to_string(max_modes)}};
  const Plan p = plan;
  plan.execute = [p, instances, max_modes]() {
    estimate::SeriesResult series;
    double worst_z = 0.0;
    double worst_prob = 0.0;
    bool pass = true;
    for (long long i = 0; i < instances; ++i) {
      RngStream rng(derive_seed(p.seed, 0), static_cast<std::uint64_t>(i));
      const auto inst = random_gaussian_instance(rng, 4, static_cast<int>(max_modes));
      const auto cmp = compare_with_oracle(
          inst, {p.n_samples, derive_seed(p.seed, static_cast<std::uint64_t>(i) + 1), p.threads});
      estimate::EstimatorResult e = cmp.mc;
      e.mean = cmp.mc.mean - cmp.exact;
      series.add(static_cast<double>(i + 1), e);
      const double z = std::abs(e.mean) / std::max(cmp.mc.stderr_mean, 1e-300);
      worst_z = std::max(worst_z, std::abs(e.mean) <= 1e-9 ? 0.0 : z);
      worst_prob = std::max(worst_prob, cmp.max_probability_error);
      pass = pass && cmp.agrees(4.0) && cmp.max_probability_error <= 1e-10;
    }
    RunResult out;
    Common none;
    out.series.push_back(make_output(p.name, "instance", "MIE(MC) - MIE(exact)", series, none));
    out.summary.emplace_back("max_abs_z", format_double(worst_z));
    out.summary.emplace_back("max_probability_error", format_double(worst_prob));
    out.summary.emplace_back("pass", pass ? "true" : "false");
    return out;
  };
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  f << contents;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x6a09e667f3bcc909ULL));
}

Plan plan_experiment(Config& cfg, const RunOptions& options) {
  Plan plan;
  plan.experiment = cfg.get_string("experiment");
  const std::string& e = plan.experiment;
  if (e == "xx") {
    plan_xx(cfg, options, plan);
  } else if (e == "chern") {
    plan_chern(cfg, options, plan);
  } else if (e == "metal") {
    plan_metal(cfg, options, plan);
  } else if (e == "rs") {
    plan_rs(cfg, options, plan);
  } else if (e == "toric") {
    plan_topological(cfg, options, plan, false);
  } else if (e == "double") {
    plan_topological(cfg, options, plan, true);
  } else if (e == "mera") {
    plan_mera(cfg, options, plan);
  } else if (e == "oracle-check") {
    plan_oracle_check(cfg, options, plan);
  } else {
    cfg.fail("experiment", "unknown experiment '" + e +
                               "' (xx, chern, metal, rs, toric, double, mera, oracle-check)");
  }
  cfg.check_all_used();
  return plan;
}

int run_command(const std::string& config_path, const RunOptions& options, std::ostream& out,
                std::ostream& err) {
  Plan plan;
  Config cfg;
  try {
    cfg = Config::load(config_path);
    plan = plan_experiment(cfg, options);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  try {
    result = plan.execute();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  KeyValues manifest = {{"experiment", plan.experiment},
                        {"code_version", MIEFLOW_VERSION},
                        {"git_revision", MIEFLOW_GIT_REVISION},
                        {"schema_version", std::to_string(kSchemaVersion)},
                        {"config_file", config_path},
                        {"seed", std::to_string(plan.seed)},
                        {"threads", std::to_string(plan.threads)},
                        {"n_samples", std::to_string(plan.n_samples)},
                        {"started_utc", started},
                        {"wall_time_s", format_double(wall)}};
  for (const auto& [k, v] : cfg.echo()) manifest.emplace_back("config." + k, v);
  for (const auto& [k, v] : plan.settings) manifest.emplace_back("setting." + k, v);

  try {
    const std::filesystem::path dir(plan.out_dir);
    std::filesystem::create_directories(dir);
    for (const auto& s : result.series) {
      const std::string prefix = "series." + s.name;
      write_file(dir / (s.name + ".csv"), to_csv(s.series));
      manifest.emplace_back(prefix + ".csv", s.name + ".csv");
      manifest.emplace_back(prefix + ".points", std::to_string(s.series.points.size()));
      manifest.emplace_back(prefix + ".abscissa", s.x_label);
      manifest.emplace_back(prefix + ".value", s.y_label);
      for (const auto& [k, v] : s.provenance) manifest.emplace_back(prefix + "." + k, v);
      if (s.fit) {
        manifest.emplace_back(prefix + ".fit.kind", fit_kind_name(s.fit->kind));
        manifest.emplace_back(prefix + ".fit.window",
                              "[" + format_double(s.fit->window.lo) + ", " + format_double(s.fit->window.hi) + "]");
        manifest.emplace_back(prefix + ".fit.points", std::to_string(s.fit->line.points));
        manifest.emplace_back(prefix + ".fit.slope", format_double(s.fit->line.slope));
        manifest.emplace_back(prefix + ".fit.slope_stderr", format_double(s.fit->line.slope_stderr));
        manifest.emplace_back(prefix + ".fit.intercept", format_double(s.fit->line.intercept));
        manifest.emplace_back(prefix + ".fit.r_squared", format_double(s.fit->line.r_squared));
      }
      if (plan.svg) {
        write_file(dir / (s.name + ".svg"), to_svg(s));
        manifest.emplace_back(prefix + ".svg", s.name + ".svg");
      }
    }
    for (const auto& [k, v] : result.summary) manifest.emplace_back("summary." + k, v);
    write_file(dir / (plan.name + ".manifest"), to_manifest(manifest));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  out << plan.experiment << ": wrote " << result.series.size() << " series to " << plan.out_dir << "\n";
  for (const auto& [k, v] : result.summary) out << "  " << k << " = " << v << "\n";
  return kExitOk;
}

}  // namespace mieflow::cli
