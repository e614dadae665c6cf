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
#include <vector>

#include "mieflow/common.hpp"
#include "mieflow/fit.hpp"

using namespace mieflow;
using namespace mieflow::fit;
using estimate::EstimatorResult;
using estimate::SeriesResult;

namespace {

SeriesResult make_series(const std::vector<double>& x, double (*f)(double), double rel_err = 0.01) {
  SeriesResult s;
  for (double xi : x) {
    EstimatorResult e;
    e.mean = f(xi);
    e.stderr_mean = rel_err * e.mean;
    e.n_samples = 100;
    s.add(xi, e);
  }
  return s;
}

}  // namespace

TEST_CASE("straight line fit") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.points == 4);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InvalidArgument);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST_CASE("power law recovered exactly") {
  const auto s = make_series({1, 2, 4, 8, 16, 32}, [](double x) { return 3.0 * std::pow(x, -2.0); });
  const auto f = power_law_fit(s, {2, 16});
  CHECK(f.slope == doctest::Approx(-2.0));
  CHECK(f.points == 4);
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
}

TEST_CASE("noisy power law within its error bar") {
  RngStream rng(11, 0);
  SeriesResult s;
  for (double x = 1; x <= 64; x *= 1.5) {
    EstimatorResult e;
    e.mean = std::pow(x, -0.9) * (1.0 + 0.02 * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0));
    e.stderr_mean = 0.02 * std::pow(x, -0.9);
    s.add(x, e);
  }
  const auto f = power_law_fit(s, {});
  CHECK(std::abs(f.slope + 0.9) < 4 * f.slope_stderr);
  CHECK(f.slope_stderr > 0.0);
  CHECK(f.slope_stderr < 0.05);
}

TEST_CASE("exponential and logarithmic fits") {
  const auto e = make_series({1, 2, 3, 4, 5}, [](double x) { return std::exp(-x / 2.0); });
  CHECK(exponential_fit(e, {}).slope == doctest::Approx(-0.5));
  const auto l = make_series({2, 4, 8, 16}, [](double x) { return 0.25 * std::log(x) + 1.0; });
  CHECK(log_fit(l, {}).slope == doctest::Approx(0.25));
}

TEST_CASE("fits reject nonpositive data and thin windows") {
  SeriesResult s;
  for (double x : {1.0, 2.0, 3.0}) s.add(x, estimate::summarize({x == 2.0 ? -1.0 : 1.0}));
  CHECK_THROWS_AS(power_law_fit(s, {}), InvalidArgument);
  const auto ok = make_series({1, 2, 3, 4}, [](double x) { return x; });
  CHECK_THROWS_AS(power_law_fit(ok, {3, 4}), InvalidArgument);
}

TEST_CASE("octave histogram density") {
  std::vector<long long> counts;
  add_octave_counts(std::vector<int>{1, 2, 3, 4, 7, 8, 15}, counts);
  REQUIRE(counts.size() == 4);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 2);
  CHECK(counts[2] == 2);
  CHECK(counts[3] == 2);
  const auto d = octave_density(counts, 2.0);
  REQUIRE(d.points.size() == 4);
  CHECK(d.points[2].abscissa == doctest::Approx(4.0 * std::sqrt(2.0)));
  CHECK(d.points[2].value.mean == doctest::Approx(2.0 / 8.0));
  CHECK_THROWS_AS(add_octave_counts(std::vector<int>{0}, counts), InvalidArgument);

  std::vector<long long> power(12, 0);
  for (int b = 0; b < 12; ++b) power[b] = 1LL << (24 - 2 * b);
  const auto pd = octave_density(power, 1.0);
  CHECK(power_law_fit(pd, {}).slope == doctest::Approx(-3.0));
}

TEST_CASE("data collapse score") {
  const auto a = make_series({1, 2, 4, 8}, [](double x) { return 1.0 / x; });
  const auto b = make_series({1, 2, 4, 8}, [](double x) { return 1.0 / x; });
  const auto c = make_series({1, 2, 4, 8}, [](double x) { return 2.0 / x; });
  CHECK(data_collapse(std::vector<SeriesResult>{a, b}) == doctest::Approx(0.0));
  const double ln2sq = std::log(2.0) * std::log(2.0);
  CHECK(data_collapse(std::vector<SeriesResult>{a, c}) == doctest::Approx(ln2sq));
  CHECK_THROWS_AS(data_collapse(std::vector<SeriesResult>{a}), InvalidArgument);
  const auto far = make_series({16, 32, 64}, [](double x) { return x; });
  CHECK_THROWS_AS(data_collapse(std::vector<SeriesResult>{a, far}), InvalidArgument);
}
