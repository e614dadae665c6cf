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

#include <atomic>
#include <cmath>
#include <vector>

#include "mieflow/estimator.hpp"
#include "mieflow/lattice.hpp"

using namespace mieflow;
using namespace mieflow::estimate;

TEST_CASE("summarize computes mean and both error bars") {
  const auto r = summarize({1.0, 2.0, 3.0, 4.0}, true);
  CHECK(r.mean == doctest::Approx(2.5));
  CHECK(r.n_samples == 4);
  CHECK(r.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(r.jackknife_stderr == doctest::Approx(r.stderr_mean));
  CHECK(r.samples.size() == 4);
  CHECK(summarize({7.0}).stderr_mean == 0.0);
  CHECK_THROWS_AS(summarize({}), InvalidArgument);
}

TEST_CASE("series keep abscissas sorted and distinct") {
  SeriesResult s;
  s.add(3.0, summarize({1.0}));
  s.add(1.0, summarize({2.0}));
  REQUIRE(s.points.size() == 2);
  CHECK(s.points.front().abscissa == 1.0);
  CHECK_THROWS_AS(s.add(3.0, summarize({1.0})), InvalidArgument);
  s.validate();
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  for (int threads : {1, 3}) {
    std::vector<std::atomic<int>> hits(101);
    parallel_for(101, threads, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, threads,
                                 [](std::int64_t i) {
                                   if (i == 7) throw InvalidArgument("boom");
                                 }),
                    InvalidArgument);
  }
}

TEST_CASE("Monte Carlo MIE is independent of the thread count") {
  const auto state = lattice::xx_chain_state(16, 0.5);
  const auto regions = lattice::interval_regions(16, 0, 1, 8, 9);
  SamplingOptions o;
  o.n_samples = 300;
  o.seed = 42;
  o.threads = 1;
  o.keep_samples = true;
  const auto one = monte_carlo_mie(state, regions, o);
  o.threads = 4;
  const auto four = monte_carlo_mie(state, regions, o);
  CHECK(one.samples == four.samples);
  CHECK(one.mean == four.mean);
  CHECK(one.mean > 0.0);
  o.seed = 43;
  CHECK(monte_carlo_mie(state, regions, o).mean != one.mean);
}

TEST_CASE("product states carry no measurement-induced entanglement") {
  const std::vector<int> occ{1, 0, 1, 1, 0, 0};
  const auto state = gaussian::GaussianState::from_occupations(occ);
  const auto regions = lattice::interval_regions(6, 0, 0, 4, 5);
  SamplingOptions o;
  o.n_samples = 50;
  const auto r = monte_carlo_mie(state, regions, o);
  CHECK(r.mean == doctest::Approx(0.0));
  CHECK(mii(state, regions, r).mean == doctest::Approx(0.0));
}

TEST_CASE("traced MII with the full regions reduces to MII") {
  const auto state = lattice::xx_chain_state(12, 0.5);
  auto regions = lattice::interval_regions(12, 0, 1, 6, 7);
  regions.a0 = regions.a;
  regions.b0 = regions.b;
  SamplingOptions o;
  o.n_samples = 200;
  o.seed = 9;
  const auto direct = mii(state, regions, monte_carlo_mie(state, regions, o));
  const auto traced = traced_mii(state, regions, o);
  CHECK(traced.mean == doctest::Approx(direct.mean).epsilon(1e-9));
  auto no_b0 = regions;
  no_b0.b0.clear();
  CHECK_THROWS_AS(traced_mii(state, no_b0, o), InvalidArgument);
}

TEST_CASE("estimators reject empty measurement regions and bad options") {
  const auto state = lattice::xx_chain_state(4, 0.5);
  RegionSpec r;
  r.a = {0, 1};
  r.b = {2, 3};
  SamplingOptions o;
  CHECK_THROWS_AS(monte_carlo_mie(state, r, o), InvalidArgument);
  const auto ok = lattice::interval_regions(4, 0, 0, 2, 3);
  o.n_samples = 0;
  CHECK_THROWS_AS(monte_carlo_mie(state, ok, o), InvalidArgument);
  o.n_samples = 1;
  o.threads = 0;
  CHECK_THROWS_AS(monte_carlo_mie(state, ok, o), InvalidArgument);
}

TEST_CASE("scaled MIE subtracts the full-size value from twice the halved one") {
  const auto s = scaled_mie_from([](int halvings) {
    return summarize(halvings == 0 ? std::vector<double>{1.0, 1.2} : std::vector<double>{0.8, 0.8});
  });
  CHECK(s.full.mean == doctest::Approx(1.1));
  CHECK(s.half.mean == doctest::Approx(0.8));
  CHECK(s.value.mean == doctest::Approx(0.5));
  CHECK(s.value.stderr_mean == doctest::Approx(s.full.stderr_mean));
}
