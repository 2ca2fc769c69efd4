// Copyright 2026 The planscore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Brute-force reference implementations. These share no code with the
// production algorithms beyond the graph containers and are only meant for
// small inputs (about 7 vertices).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "planscore/graph.hpp"

namespace planscore::oracle {

/// Permutation-minimal encoding of a labeled graph: two graphs are
/// isomorphic iff their encodings are equal.
inline std::string permutation_canonical(const LabeledGraph& g) {
  const int n = g.vertex_count();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [u, v] : g.edges) adj[u][v] = adj[v][u] = true;
  std::string best;
  bool have = false;
  std::string cur;
  do {
    cur.clear();
    for (int i = 0; i < n; ++i) cur += static_cast<char>('A' + g.labels[perm[i]]);
    cur += '|';
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) cur += adj[perm[i]][perm[j]] ? '1' : '0';
    }
    if (!have || cur < best) {
      best = cur;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline bool isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
  return a.vertex_count() == b.vertex_count() && a.edge_count() == b.edge_count() &&
         permutation_canonical(a) == permutation_canonical(b);
}

/// Every connected edge-induced subgraph (at least one edge) of `g`, as
/// permutation-canonical strings.
inline std::set<std::string> connected_subgraph_classes(const LabeledGraph& g) {
  std::set<std::string> out;
  const int m = g.edge_count();
  const int n = g.vertex_count();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<bool> touched(n, false);
    for (int e = 0; e < m; ++e) {
      if ((mask >> e & 1u) == 0) continue;
      auto [u, v] = g.edges[e];
      touched[u] = touched[v] = true;
      parent[find(u)] = find(v);
    }
    int root = -1;
    bool connected = true;
    for (int v = 0; v < n && connected; ++v) {
      if (!touched[v]) continue;
      if (root < 0) root = find(v);
      else if (find(v) != root) connected = false;
    }
    if (!connected) continue;
    LabeledGraph sub;
    std::vector<int> index(n, -1);
    for (int v = 0; v < n; ++v) {
      if (touched[v]) {
        index[v] = sub.vertex_count();
        sub.add_vertex(g.labels[v]);
      }
    }
    for (int e = 0; e < m; ++e) {
      if (mask >> e & 1u) sub.add_edge(index[g.edges[e].first], index[g.edges[e].second]);
    }
    out.insert(permutation_canonical(sub));
  }
  return out;
}

/// Frequent-pattern oracle: canonical class -> supporting graph indices.
inline std::map<std::string, std::vector<int>> enumerate_frequent(const std::vector<LabeledGraph>& corpus,
                                                                  int min_support) {
  std::map<std::string, std::vector<int>> support;
  for (int gi = 0; gi < static_cast<int>(corpus.size()); ++gi) {
    for (const auto& cls : connected_subgraph_classes(corpus[gi])) support[cls].push_back(gi);
  }
  std::erase_if(support, [&](const auto& kv) { return static_cast<int>(kv.second.size()) < min_support; });
  return support;
}

/// Exhaustive partial injective label-preserving mappings; returns the
/// lexicographic maximum of (mapped vertices, preserved edges).
inline std::pair<int, int> mcs_size(const LabeledGraph& a, const LabeledGraph& b) {
  const int na = a.vertex_count();
  const int nb = b.vertex_count();
  std::vector<int> map(na, -1);
  std::vector<bool> used(nb, false);
  std::pair<int, int> best{0, 0};
  auto score = [&]() {
    int nodes = 0;
    int edges = 0;
    for (int v = 0; v < na; ++v) nodes += map[v] >= 0;
    for (auto [u, v] : a.edges) {
      if (map[u] >= 0 && map[v] >= 0 && b.has_edge(map[u], map[v])) ++edges;
    }
    return std::pair{nodes, edges};
  };
  auto rec = [&](auto&& self, int v) -> void {
    if (v == na) {
      best = std::max(best, score());
      return;
    }
    self(self, v + 1);
    for (int w = 0; w < nb; ++w) {
      if (used[w] || a.labels[v] != b.labels[w]) continue;
      used[w] = true;
      map[v] = w;
      self(self, v + 1);
      map[v] = -1;
      used[w] = false;
    }
  };
  rec(rec, 0);
  return best;
}

/// Smallest set of non-terminal vertices whose union with `terminals`
/// induces a connected subgraph; exhaustive over all subsets. Returns the
/// minimum cardinality, or -1 when none exists.
inline int min_steiner_vertices(const LabeledGraph& g, const std::vector<int>& terminals) {
  const int n = g.vertex_count();
  std::vector<bool> is_terminal(n, false);
  for (int t : terminals) is_terminal[t] = true;
  std::vector<int> others;
  for (int v = 0; v < n; ++v) {
    if (!is_terminal[v]) others.push_back(v);
  }
  int best = -1;
  for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
    const int size = std::popcount(mask);
    if (best >= 0 && size >= best) continue;
    std::vector<bool> in = is_terminal;
    for (std::size_t i = 0; i < others.size(); ++i) {
      if (mask >> i & 1u) in[others[i]] = true;
    }
    std::vector<bool> seen(n, false);
    std::vector<int> stack{terminals.front()};
    seen[terminals.front()] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : g.adj[u]) {
        if (in[w] && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    bool ok = true;
    for (int v = 0; v < n; ++v) ok = ok && (!in[v] || seen[v]);
    if (ok) best = size;
  }
  return best;
}

/// Random labeled graph with `n` vertices drawn from `labels`; each pair is
/// joined with probability `edge_prob`. When `connected` is set, a random
/// spanning tree is laid down first.
inline LabeledGraph random_graph(std::mt19937_64& rng, int n, const std::vector<int>& labels,
                                 double edge_prob, bool connected) {
  LabeledGraph g;
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  for (int i = 0; i < n; ++i) g.add_vertex(labels[pick(rng)]);
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  if (connected) {
    for (int v = 1; v < n; ++v) {
      const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
      g.add_edge(u, v);
      has[u][v] = has[v][u] = true;
    }
  }
  std::bernoulli_distribution coin(edge_prob);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!has[u][v] && coin(rng)) {
        g.add_edge(u, v);
        has[u][v] = has[v][u] = true;
      }
    }
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

/// Same graph with vertex i moved to position perm[i].
inline LabeledGraph permute(const LabeledGraph& g, const std::vector<int>& perm) {
  LabeledGraph out;
  out.labels.assign(g.labels.size(), 0);
  out.adj.assign(g.labels.size(), {});
  for (int v = 0; v < g.vertex_count(); ++v) out.labels[perm[v]] = g.labels[v];
  for (auto [u, v] : g.edges) out.add_edge(perm[u], perm[v]);
  for (auto& a : out.adj) std::sort(a.begin(), a.end());
  return out;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace planscore::oracle
