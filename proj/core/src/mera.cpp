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

#include "mieflow/mera.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <queue>

namespace mieflow::mera {

namespace {

// Dinic max-flow on a small integer network.
class FlowNetwork {
 public:
  explicit FlowNetwork(int n) : head_(static_cast<std::size_t>(n), -1), level_(n), iter_(n) {}

  void add_edge(int u, int v, int cap_uv, int cap_vu) {
    arcs_.push_back({v, cap_uv, head_[u]});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({u, cap_vu, head_[v]});
    head_[v] = static_cast<int>(arcs_.size()) - 1;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (int f = dfs(s, t, INT_MAX)) flow += f;
    }
    return flow;
  }

 private:
  struct Arc {
    int to;
    int cap;
    int next;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[u]; e >= 0; e = arcs_[e].next) {
        if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
          level_[arcs_[e].to] = level_[u] + 1;
          q.push(arcs_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int u, int t, int f) {
    if (u == t) return f;
    for (int& e = iter_[u]; e >= 0; e = arcs_[e].next) {
      Arc& a = arcs_[e];
      if (a.cap > 0 && level_[a.to] == level_[u] + 1) {
        const int d = dfs(a.to, t, std::min(f, a.cap));
        if (d > 0) {
          a.cap -= d;
          arcs_[e ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

void check_legs(const MeraGraph& g, std::span<const Leg> legs) {
  if (static_cast<int>(legs.size()) != g.length) {
    throw InvalidArgument("one boundary condition per leg required");
  }
}

bool has_both_sides(std::span<const Leg> legs) {
  bool up = false;
  bool down = false;
  for (Leg l : legs) {
    up = up || l == Leg::up;
    down = down || l == Leg::down;
  }
  return up && down;
}

}  // namespace

MeraGraph build_mera(int length) {
  if (length < 4 || (length & (length - 1)) != 0) {
    throw InvalidArgument("MERA length must be a power of two >= 4");
  }
  MeraGraph g;
  g.length = length;
  g.num_nodes = length;
  std::vector<int> wires(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) wires[i] = i;
  while (wires.size() > 1) {
    const int n = static_cast<int>(wires.size());
    if (n > 2) {
      for (int i = 0; i < n / 2; ++i) {
        const int d = g.num_nodes++;
        const int l = 2 * i + 1;
        const int r = (2 * i + 2) % n;
        g.edges.emplace_back(wires[l], d);
        g.edges.emplace_back(wires[r], d);
        wires[l] = d;
        wires[r] = d;
      }
    }
    std::vector<int> next;
    for (int i = 0; i < n / 2; ++i) {
      const int w = g.num_nodes++;
      g.edges.emplace_back(wires[2 * i], w);
      g.edges.emplace_back(wires[2 * i + 1], w);
      next.push_back(w);
    }
    wires = std::move(next);
    ++g.depth;
  }
  return g;
}

int min_cut(const MeraGraph& graph, std::span<const Leg> legs) {
  check_legs(graph, legs);
  if (!has_both_sides(legs)) return 0;
  const int source = graph.num_nodes;
  const int sink = graph.num_nodes + 1;
  FlowNetwork net(graph.num_nodes + 2);
  for (auto [u, v] : graph.edges) net.add_edge(u, v, 1, 1);
  const int big = static_cast<int>(graph.edges.size()) + 1;
  for (int i = 0; i < graph.length; ++i) {
    if (legs[i] == Leg::up) net.add_edge(source, i, big, 0);
    if (legs[i] == Leg::down) net.add_edge(i, sink, big, 0);
  }
  return net.max_flow(source, sink);
}

int min_cut_brute_force(const MeraGraph& graph, std::span<const Leg> legs) {
  check_legs(graph, legs);
  if (!has_both_sides(legs)) return 0;
  std::vector<int> open;
  for (int i = 0; i < graph.length; ++i) {
    if (legs[i] == Leg::free) open.push_back(i);
  }
  for (int i = graph.length; i < graph.num_nodes; ++i) open.push_back(i);
  if (open.size() > 26) throw InvalidArgument("brute force limited to 26 free nodes");
  std::vector<char> side(static_cast<std::size_t>(graph.num_nodes), 0);
  for (int i = 0; i < graph.length; ++i) side[i] = legs[i] == Leg::up ? 1 : 0;
  int best = INT_MAX;
  const std::uint64_t total = std::uint64_t{1} << open.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t k = 0; k < open.size(); ++k) side[open[k]] = static_cast<char>((mask >> k) & 1);
    int cut = 0;
    for (auto [u, v] : graph.edges) cut += side[u] != side[v];
    best = std::min(best, cut);
  }
  return best;
}

int region_cut(const MeraGraph& graph, std::span<const int> region) {
  const SiteSet r = normalized_sites(region, graph.length, "region_cut");
  std::vector<Leg> legs(static_cast<std::size_t>(graph.length), Leg::up);
  for (int s : r) legs[s] = Leg::down;
  return min_cut(graph, legs);
}

LargeDMutualInfo mutual_info_large_d(const MeraGraph& graph, Interval a, Interval b, double log_d) {
  if (!(0 <= a.first && a.first <= a.last && a.last < b.first && b.first <= b.last &&
        b.last < graph.length)) {
    throw InvalidArgument("mutual_info_large_d: intervals must be ordered and disjoint");
  }
  if (!(log_d > 0.0)) throw InvalidArgument("mutual_info_large_d: log D must be positive");
  auto cut = [&](int first, int last) {
    SiteSet r;
    for (int i = first; i <= last; ++i) r.push_back(i);
    return r.empty() ? 0 : region_cut(graph, r);
  };
  LargeDMutualInfo out;
  out.f_a = log_d * cut(a.first, a.last);
  out.f_b = log_d * cut(b.first, b.last);
  out.f_connected = log_d * (cut(a.first, b.last) + cut(a.last + 1, b.first - 1));
  const double fab = out.f_a + out.f_b;
  // log(e^{-fab} + e^{-fc}) evaluated stably.
  const double lo = std::min(fab, out.f_connected);
  const double hi = std::max(fab, out.f_connected);
  out.mutual_information = fab - lo + std::log1p(std::exp(lo - hi));
  return out;
}

double mie_large_d(const MeraGraph& graph, std::span<const int> a, std::span<const int> b,
                   double log_d) {
  std::vector<Leg> legs(static_cast<std::size_t>(graph.length), Leg::free);
  for (int s : normalized_sites(a, graph.length, "mie_large_d A")) legs[s] = Leg::down;
  for (int s : normalized_sites(b, graph.length, "mie_large_d B")) {
    if (legs[s] != Leg::free) throw InvalidArgument("mie_large_d: A and B overlap");
    legs[s] = Leg::up;
  }
  return log_d * min_cut(graph, legs);
}

}  // namespace mieflow::mera
