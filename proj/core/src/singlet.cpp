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

#include "mieflow/singlet.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <tuple>

namespace mieflow::singlet {

std::vector<std::pair<int, int>> SingletConfig::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < length; ++i) {
    const int j = partner[i];
    if (j > i) out.emplace_back(i, j);
  }
  return out;
}

void SingletConfig::validate(std::span<const int> sites) const {
  if (static_cast<int>(partner.size()) != length) throw InvalidArgument("partner table size mismatch");
  std::vector<char> in(static_cast<std::size_t>(length), sites.empty() ? 1 : 0);
  for (int s : sites) {
    if (s < 0 || s >= length) throw InvalidArgument("site out of range");
    in[s] = 1;
  }
  for (int i = 0; i < length; ++i) {
    if (!in[i]) continue;
    const int j = partner[i];
    if (j < 0 || j >= length || j == i || !in[j] || partner[j] != i) {
      throw InvalidArgument("not a perfect matching at site " + std::to_string(i));
    }
  }
}

SingletConfig from_pairs(int length, std::span<const std::pair<int, int>> pairs) {
  SingletConfig c{length, std::vector<int>(static_cast<std::size_t>(length), -1)};
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= length || j >= length || i == j || c.partner[i] != -1 ||
        c.partner[j] != -1) {
      throw InvalidArgument("from_pairs: invalid or overlapping pair");
    }
    c.partner[i] = j;
    c.partner[j] = i;
  }
  return c;
}

SingletConfig sdrg_decimate(std::span<const double> couplings, Boundary boundary) {
  const bool ring = boundary == Boundary::periodic;
  const int n = ring ? static_cast<int>(couplings.size()) : static_cast<int>(couplings.size()) + 1;
  if (n < 2 || n % 2 != 0) throw InvalidArgument("sdrg: chain length must be even and >= 2");
  for (double j : couplings) {
    if (!(j > 0.0)) throw InvalidArgument("sdrg: couplings must be positive");
  }
  // Bond i joins i and right[i]; it is stored at its left site.
  std::vector<int> left(n), right(n);
  std::vector<double> bond(n, 0.0);
  std::vector<std::uint32_t> stamp(n, 0);
  for (int i = 0; i < n; ++i) {
    left[i] = i - 1;
    right[i] = i + 1;
  }
  if (ring) {
    left[0] = n - 1;
    right[n - 1] = 0;
  } else {
    right[n - 1] = -1;
  }
  using Entry = std::tuple<double, int, std::uint32_t>;
  auto cmp = [](const Entry& a, const Entry& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) > std::get<1>(b);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (int i = 0; i < static_cast<int>(couplings.size()); ++i) {
    bond[i] = couplings[i];
    heap.emplace(bond[i], i, 0u);
  }
  SingletConfig out{n, std::vector<int>(static_cast<std::size_t>(n), -1)};
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  int remaining = n;
  while (remaining > 0) {
    if (heap.empty()) throw NumericalError("sdrg: ran out of bonds");
    const auto [jm, i, st] = heap.top();
    heap.pop();
    if (!alive[i] || st != stamp[i] || right[i] < 0 || !alive[right[i]]) continue;
    const int j = right[i];
    out.partner[i] = j;
    out.partner[j] = i;
    alive[i] = alive[j] = 0;
    remaining -= 2;
    if (remaining == 0) break;
    const int l = left[i];
    const int r = right[j];
    ++stamp[i];
    ++stamp[j];
    if (l >= 0 && r >= 0) {
      bond[l] = bond[l] * bond[j] / (2.0 * jm);
      ++stamp[l];
      right[l] = r;
      left[r] = l;
      heap.emplace(bond[l], l, stamp[l]);
    } else if (l >= 0) {
      right[l] = -1;
      ++stamp[l];
    } else if (r >= 0) {
      left[r] = -1;
    }
  }
  return out;
}

SingletConfig sdrg_sample(int length, RngStream& rng, Boundary boundary) {
  const int bonds = boundary == Boundary::periodic ? length : length - 1;
  if (bonds < 1) throw InvalidArgument("sdrg: chain too short");
  std::vector<double> j(static_cast<std::size_t>(bonds));
  for (double& x : j) x = 1.0 - rng.uniform();
  return sdrg_decimate(j, boundary);
}

BellPairing nearest_neighbor_pairing(int length, std::span<const int> measured, Boundary boundary) {
  const SiteSet m = normalized_sites(measured, length, "bell pairing");
  std::vector<char> in(static_cast<std::size_t>(length), 0);
  for (int s : m) in[s] = 1;
  BellPairing out;
  if (m.empty()) return out;
  const bool ring = boundary == Boundary::periodic;
  if (static_cast<int>(m.size()) == length) {
    for (int i = 0; i + 1 < length; i += 2) out.emplace_back(i, i + 1);
    return out;
  }
  // Start just after an unmeasured site so runs never straddle the origin.
  int start = 0;
  if (ring) {
    while (in[start]) ++start;
  }
  std::vector<int> run;
  auto flush = [&]() {
    if (run.size() % 2 != 0) throw InvalidArgument("bell pairing: odd run of measured sites");
    for (std::size_t k = 0; k < run.size(); k += 2) {
      out.emplace_back(std::min(run[k], run[k + 1]), std::max(run[k], run[k + 1]));
    }
    run.clear();
  };
  for (int step = 0; step < length; ++step) {
    const int s = ring ? (start + step) % length : step;
    if (in[s]) {
      run.push_back(s);
    } else {
      flush();
    }
  }
  flush();
  std::sort(out.begin(), out.end());
  return out;
}

SingletConfig bell_rewire(const SingletConfig& config, const BellPairing& pairing) {
  const int n = config.length;
  std::vector<int> bell(static_cast<std::size_t>(n), -1);
  for (auto [i, j] : pairing) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j || bell[i] != -1 || bell[j] != -1) {
      throw InvalidArgument("bell_rewire: invalid or overlapping Bell pair");
    }
    bell[i] = j;
    bell[j] = i;
  }
  config.validate();
  SingletConfig out{n, std::vector<int>(static_cast<std::size_t>(n), -1)};
  for (int u = 0; u < n; ++u) {
    if (bell[u] != -1 || out.partner[u] != -1) continue;
    int x = config.partner[u];
    while (bell[x] != -1) x = config.partner[bell[x]];
    out.partner[u] = x;
    out.partner[x] = u;
  }
  return out;
}

int count_spanning(const SingletConfig& config, std::span<const int> a, std::span<const int> b) {
  std::vector<char> in_b(static_cast<std::size_t>(config.length), 0);
  for (int s : b) in_b[s] = 1;
  int count = 0;
  for (int s : a) {
    const int p = config.partner[s];
    if (p >= 0 && in_b[p]) ++count;
  }
  return count;
}

std::vector<int> pair_distances(const SingletConfig& config, Boundary boundary) {
  std::vector<int> out;
  for (auto [i, j] : config.pairs()) {
    int d = j - i;
    if (boundary == Boundary::periodic) d = std::min(d, config.length - d);
    out.push_back(d);
  }
  return out;
}

MieMii mie_mii_zbasis(const SingletConfig& config, const RegionSpec& regions) {
  regions.validate(config.length);
  config.validate();
  return {count_spanning(config, regions.a, regions.b) * kLn2, 0.0};
}

MieMii mie_mii_bell(const SingletConfig& config, const RegionSpec& regions,
                    const BellPairing& pairing) {
  regions.validate(config.length);
  std::vector<char> covered(static_cast<std::size_t>(config.length), 0);
  for (auto [i, j] : pairing) {
    if (i < 0 || j < 0 || i >= config.length || j >= config.length) {
      throw InvalidArgument("mie_mii_bell: Bell pair out of range");
    }
    covered[i] = covered[j] = 1;
  }
  std::size_t n_covered = 0;
  for (int s : regions.m) {
    if (!covered[s]) throw InvalidArgument("mie_mii_bell: pairing does not cover M");
    ++n_covered;
  }
  if (2 * pairing.size() != n_covered) throw InvalidArgument("mie_mii_bell: pairing leaves M");
  const int before = count_spanning(config, regions.a, regions.b);
  const SingletConfig after = bell_rewire(config, pairing);
  const double mie = count_spanning(after, regions.a, regions.b) * kLn2;
  return {mie, 2.0 * mie - 2.0 * before * kLn2};
}

}  // namespace mieflow::singlet
