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

#include "mieflow/common.hpp"

#include <algorithm>
#include <cmath>

namespace mieflow {

SiteSet normalized_sites(std::span<const int> sites, int n, const char* what) {
  SiteSet out(sites.begin(), sites.end());
  std::sort(out.begin(), out.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0 || (n > 0 && out[i] >= n)) {
      throw InvalidArgument(std::string(what) + ": site index " + std::to_string(out[i]) +
                            " out of range");
    }
    if (i > 0 && out[i] == out[i - 1]) {
      throw InvalidArgument(std::string(what) + ": duplicate site " + std::to_string(out[i]));
    }
  }
  return out;
}

void RegionSpec::validate(int num_sites, bool require_cover) const {
  std::vector<int> owner(static_cast<std::size_t>(num_sites), -1);
  auto mark = [&](const SiteSet& s, int tag, const char* name) {
    for (int x : s) {
      if (x < 0 || x >= num_sites) {
        throw InvalidArgument(std::string("region ") + name + ": site " + std::to_string(x) +
                              " out of range");
      }
      if (owner[x] != -1) {
        throw InvalidArgument(std::string("region ") + name + ": site " + std::to_string(x) +
                              " appears in more than one region");
      }
      owner[x] = tag;
    }
  };
  mark(a, 0, "A");
  mark(b, 1, "B");
  mark(m, 2, "M");
  if (require_cover) {
    for (int i = 0; i < num_sites; ++i) {
      if (owner[i] == -1) {
        throw InvalidArgument("regions do not cover site " + std::to_string(i));
      }
    }
  }
  for (int x : a0) {
    if (x < 0 || x >= num_sites || owner[x] != 0) {
      throw InvalidArgument("A0 must be a subset of A");
    }
  }
  for (int x : b0) {
    if (x < 0 || x >= num_sites || owner[x] != 1) {
      throw InvalidArgument("B0 must be a subset of B");
    }
  }
}

SiteSet RegionSpec::ab() const {
  SiteSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

double xlogx_clipped(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x > 0.0 ? x * std::log(x) : 0.0;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

// xoshiro256** seeded through SplitMix64 of (seed, index).
RngStream::RngStream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = mix64(seed) ^ mix64(index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL);
  for (auto& s : s_) {
    state += 0x9e3779b97f4a7c15ULL;
    s = mix64(state);
  }
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace mieflow
