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

#include <algorithm>
#include <cmath>
#include <vector>

#include "mieflow/mera.hpp"

using namespace mieflow;
using namespace mieflow::mera;

namespace {

SiteSet block(int first, int size) {
  SiteSet s;
  for (int i = 0; i < size; ++i) s.push_back(first + i);
  return s;
}

std::vector<Leg> decode(int code, int length) {
  std::vector<Leg> legs(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    legs[i] = static_cast<Leg>(code % 3);
    code /= 3;
  }
  return legs;
}

}  // namespace

TEST_CASE("graph shape") {
  const auto g4 = build_mera(4);
  CHECK(g4.depth == 2);
  const auto g64 = build_mera(64);
  CHECK(g64.depth == 6);
  for (const auto& [u, v] : g64.edges) {
    CHECK(u >= 0);
    CHECK(v < g64.num_nodes);
  }
  CHECK_THROWS_AS(build_mera(12), InvalidArgument);
  CHECK_THROWS_AS(build_mera(2), InvalidArgument);
}

TEST_CASE("max-flow agrees with exhaustive cuts on all L=8 boundary patterns") {
  const auto g = build_mera(8);
  int mismatches = 0;
  int nontrivial = 0;
  for (int code = 0; code < 6561; ++code) {
    const auto legs = decode(code, 8);
    const int fast = min_cut(g, legs);
    if (fast != min_cut_brute_force(g, legs)) ++mismatches;
    if (fast > 0) ++nontrivial;
  }
  CHECK(mismatches == 0);
  CHECK(nontrivial > 1000);
}

TEST_CASE("boundary conditions are validated") {
  const auto g = build_mera(8);
  std::vector<Leg> legs(7, Leg::free);
  CHECK_THROWS_AS(min_cut(g, legs), InvalidArgument);
  legs.assign(8, Leg::up);
  CHECK(min_cut(g, legs) == 0);
}

TEST_CASE("freeing a leg never raises the cut") {
  const auto g = build_mera(8);
  for (int code = 0; code < 6561; code += 7) {
    auto legs = decode(code, 8);
    const int base = min_cut(g, legs);
    for (int i = 0; i < 8; ++i) {
      if (legs[i] == Leg::free) continue;
      auto freed = legs;
      freed[i] = Leg::free;
      CHECK(min_cut(g, freed) <= base);
    }
  }
}

TEST_CASE("region cuts are complement symmetric and grow logarithmically") {
  const auto g = build_mera(64);
  for (int first : {0, 5, 17}) {
    for (int size : {1, 3, 8, 20}) {
      const auto r = block(first, size);
      SiteSet rest;
      for (int i = 0; i < 64; ++i) {
        if (std::find(r.begin(), r.end(), i) == r.end()) rest.push_back(i);
      }
      CHECK(region_cut(g, r) == region_cut(g, rest));
    }
  }
  int previous = 0;
  for (int size : {1, 2, 4, 8, 16, 32}) {
    const int c = region_cut(g, block(0, size));
    CHECK(c >= previous);
    previous = c;
  }
  CHECK(region_cut(g, block(0, 32)) <= 2 * 6);
}

TEST_CASE("large-D mutual information combines the two wall configurations") {
  const auto g = build_mera(64);
  const double logd = 1.0;
  const auto close = mutual_info_large_d(g, {0, 15}, {17, 32}, logd);
  CHECK(close.f_connected < close.f_a + close.f_b);
  CHECK(close.mutual_information ==
        doctest::Approx(close.f_a + close.f_b - close.f_connected +
                        std::log1p(std::exp(close.f_connected - close.f_a - close.f_b))));
  const auto far = mutual_info_large_d(g, {0, 1}, {32, 33}, logd);
  CHECK(far.f_connected > far.f_a + far.f_b);
  CHECK(far.mutual_information == doctest::Approx(std::log1p(std::exp(far.f_a + far.f_b - far.f_connected))));
  CHECK(far.mutual_information < close.mutual_information);
  CHECK_THROWS_AS(mutual_info_large_d(g, {4, 8}, {8, 10}, logd), InvalidArgument);
  CHECK_THROWS_AS(mutual_info_large_d(g, {0, 1}, {4, 8}, 0.0), InvalidArgument);
}

TEST_CASE("degenerate wall configurations give log 2") {
  const auto g = build_mera(64);
  bool found = false;
  for (int la = 1; la <= 16 && !found; ++la) {
    for (int gap = 1; gap <= 16 && !found; ++gap) {
      const auto r = mutual_info_large_d(g, {0, la - 1}, {la + gap, 2 * la + gap - 1}, 1.0);
      if (r.f_a + r.f_b == r.f_connected) {
        CHECK(r.mutual_information == doctest::Approx(std::log(2.0)));
        found = true;
      }
    }
  }
  CHECK(found);
}

TEST_CASE("MIE is bounded by the smaller region entropy") {
  const auto g = build_mera(64);
  const double logd = 2.0;
  for (int size : {2, 4, 8}) {
    for (int offset : {size, 16, 32 - size}) {
      const auto a = block(0, size);
      const auto b = block(offset + size, size);
      const double m = mie_large_d(g, a, b, logd);
      CHECK(m <= logd * std::min(region_cut(g, a), region_cut(g, b)) + 1e-12);
      CHECK(m > 0.0);
    }
  }
  const auto a = block(0, 4);
  const auto b = block(32, 4);
  CHECK(mie_large_d(g, a, b, logd) == doctest::Approx(logd * std::min(region_cut(g, a), region_cut(g, b))));
  CHECK_THROWS_AS(mie_large_d(g, a, block(2, 4), logd), InvalidArgument);
}
