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

#include <algorithm>
#include <cstdint>
#include <vector>

#include "planscore/error.hpp"
#include "planscore/graph.hpp"
#include "planscore/isomorphism.hpp"

namespace planscore {

struct McsOptions {
  /// Graphs with more vertices than this start from a greedy mapping and
  /// search under `step_budget`.
  int node_cap = 12;
  std::int64_t step_budget = 200000;
};

struct McsResult {
  int nodes = 0;
  int edges = 0;
  bool approximate = false;  // search stopped before proving optimality
};

namespace detail {

class McsSearch {
 public:
  McsSearch(const LabeledGraph& a, const LabeledGraph& b, std::int64_t budget)
      : a_(a), b_(b), budget_(budget), map_(a.labels.size(), -1), used_(b.labels.size(), 0) {
    int max_label = 0;
    for (int l : a.labels) max_label = std::max(max_label, l);
    for (int l : b.labels) max_label = std::max(max_label, l);
    skips_.assign(static_cast<std::size_t>(max_label) + 1, 0);
    std::vector<int> cb(skips_.size(), 0);
    for (int l : b.labels) ++cb[static_cast<std::size_t>(l)];
    for (int l : a.labels) ++skips_[static_cast<std::size_t>(l)];
    for (std::size_t l = 0; l < skips_.size(); ++l) {
      const int common = std::min(skips_[l], cb[l]);
      nodes_ += common;
      skips_[l] -= common;  // vertices of this label in a left unmapped
    }
    order_ = vertex_order(a);
    std::vector<int> position(a.labels.size(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) position[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);
    // edges of a that are fully decided once order_[i] is placed
    closing_.assign(order_.size(), 0);
    for (auto [u, v] : a.edges) ++closing_[static_cast<std::size_t>(std::max(position[u], position[v]))];
    suffix_.assign(order_.size() + 1, 0);
    for (int i = static_cast<int>(order_.size()) - 1; i >= 0; --i) {
      suffix_[static_cast<std::size_t>(i)] = suffix_[static_cast<std::size_t>(i) + 1] + closing_[static_cast<std::size_t>(i)];
    }
    limit_ = std::min(a.edge_count(), b.edge_count());
  }

  int nodes() const { return nodes_; }

  /// Greedy mapping: each vertex of a takes the free same-label vertex of b
  /// gaining the most edges with the vertices already mapped.
  int greedy() {
    std::vector<int> skips = skips_;
    std::vector<int> map(a_.labels.size(), -1);
    std::vector<char> used(b_.labels.size(), 0);
    int edges = 0;
    for (int v : order_) {
      int best = -1;
      int best_gain = -1;
      for (int w = 0; w < b_.vertex_count(); ++w) {
        if (used[static_cast<std::size_t>(w)] || b_.labels[static_cast<std::size_t>(w)] != a_.labels[static_cast<std::size_t>(v)]) continue;
        int gain = 0;
        for (int u : a_.adj[static_cast<std::size_t>(v)]) {
          if (map[static_cast<std::size_t>(u)] >= 0 && b_.has_edge(map[static_cast<std::size_t>(u)], w)) ++gain;
        }
        if (gain > best_gain) best_gain = gain, best = w;
      }
      auto& skip = skips[static_cast<std::size_t>(a_.labels[static_cast<std::size_t>(v)])];
      if (best < 0) continue;
      if (best_gain == 0 && skip > 0) {
        --skip;
        continue;
      }
      map[static_cast<std::size_t>(v)] = best;
      used[static_cast<std::size_t>(best)] = 1;
      edges += best_gain;
    }
    return edges;
  }

  /// Branch and bound over full-node mappings. Returns false when the step
  /// budget ran out before the search finished.
  bool run(int lower_bound) {
    best_ = lower_bound;
    steps_ = 0;
    if (best_ >= limit_) return true;
    rec(0, 0);
    return steps_ <= budget_;
  }

  int best() const { return best_; }

 private:
  static std::vector<int> vertex_order(const LabeledGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> order;
    std::vector<int> links(static_cast<std::size_t>(n), 0);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
      int pick = -1;
      for (int v = 0; v < n; ++v) {
        if (placed[static_cast<std::size_t>(v)]) continue;
        if (pick < 0 || links[static_cast<std::size_t>(v)] > links[static_cast<std::size_t>(pick)] ||
            (links[static_cast<std::size_t>(v)] == links[static_cast<std::size_t>(pick)] &&
             g.adj[static_cast<std::size_t>(v)].size() > g.adj[static_cast<std::size_t>(pick)].size())) {
          pick = v;
        }
      }
      placed[static_cast<std::size_t>(pick)] = 1;
      order.push_back(pick);
      for (int w : g.adj[static_cast<std::size_t>(pick)]) ++links[static_cast<std::size_t>(w)];
    }
    return order;
  }

  void rec(std::size_t depth, int edges) {
    if (++steps_ > budget_ || best_ >= limit_) return;
    if (depth == order_.size()) {
      best_ = std::max(best_, edges);
      return;
    }
    if (edges + suffix_[depth] <= best_) return;
    const int v = order_[depth];
    const int label = a_.labels[static_cast<std::size_t>(v)];
    for (int w = 0; w < b_.vertex_count(); ++w) {
      if (used_[static_cast<std::size_t>(w)] || b_.labels[static_cast<std::size_t>(w)] != label) continue;
      int gain = 0;
      for (int u : a_.adj[static_cast<std::size_t>(v)]) {
        const int mu = map_[static_cast<std::size_t>(u)];
        if (mu >= 0 && b_.has_edge(mu, w)) ++gain;
      }
      map_[static_cast<std::size_t>(v)] = w;
      used_[static_cast<std::size_t>(w)] = 1;
      rec(depth + 1, edges + gain);
      used_[static_cast<std::size_t>(w)] = 0;
      map_[static_cast<std::size_t>(v)] = -1;
      if (steps_ > budget_ || best_ >= limit_) return;
    }
    auto& skip = skips_[static_cast<std::size_t>(label)];
    if (skip > 0) {
      --skip;
      rec(depth + 1, edges);
      ++skip;
    }
  }

  const LabeledGraph& a_;
  const LabeledGraph& b_;
  std::int64_t budget_;
  std::int64_t steps_ = 0;
  std::vector<int> map_;
  std::vector<char> used_;
  std::vector<int> skips_;
  std::vector<int> order_;
  std::vector<int> closing_;
  std::vector<int> suffix_;
  int nodes_ = 0;
  int limit_ = 0;
  int best_ = 0;
};

}  // namespace detail

/// Maximum common subgraph size (not necessarily connected): the most
/// label-preserving vertex pairs, then the most preserved edges. Edge kinds
/// are ignored.
inline McsResult mcs_size(const LabeledGraph& g1, const LabeledGraph& g2, const McsOptions& options = {}) {
  // search from the smaller side; the result does not depend on it
  const bool swap = g2.vertex_count() < g1.vertex_count() ||
                    (g2.vertex_count() == g1.vertex_count() && g2.edge_count() < g1.edge_count());
  const LabeledGraph& a = swap ? g2 : g1;
  const LabeledGraph& b = swap ? g1 : g2;
  McsResult r;
  const bool capped = std::max(a.vertex_count(), b.vertex_count()) > options.node_cap;
  detail::McsSearch search(a, b, capped ? options.step_budget : INT64_MAX);
  r.nodes = search.nodes();
  int lower = 0;
  if (capped) {
    // the smaller graph embedding whole is the best possible outcome
    if (subgraph_isomorphic(a, b)) return {a.vertex_count(), a.edge_count(), false};
    lower = search.greedy();
    detail::McsSearch reverse(b, a, 0);
    lower = std::max(lower, reverse.greedy());
  }
  r.approximate = !search.run(lower);
  r.edges = search.best();
  return r;
}

inline McsResult mcs_size(const RoomGraph& g1, const RoomGraph& g2, const McsOptions& options = {}) {
  return mcs_size(to_labeled(g1), to_labeled(g2), options);
}

/// (mcs nodes + mcs edges) / max(n1 + e1, n2 + e2).
inline double similarity(const LabeledGraph& g1, const LabeledGraph& g2, const McsOptions& options = {}) {
  const int s1 = g1.vertex_count() + g1.edge_count();
  const int s2 = g2.vertex_count() + g2.edge_count();
  if (g1.vertex_count() == 0 && g2.vertex_count() == 0) throw Error(ErrorCode::kBothEmpty, "similarity of two empty graphs");
  const auto m = mcs_size(g1, g2, options);
  return static_cast<double>(m.nodes + m.edges) / static_cast<double>(std::max(s1, s2));
}

inline double similarity(const RoomGraph& g1, const RoomGraph& g2, const McsOptions& options = {}) {
  return similarity(to_labeled(g1), to_labeled(g2), options);
}

inline std::vector<double> similarity_vector(const LabeledGraph& g, const std::vector<LabeledGraph>& reference,
                                             const McsOptions& options = {}) {
  std::vector<double> out;
  out.reserve(reference.size());
  for (const auto& r : reference) out.push_back(similarity(g, r, options));
  return out;
}

/// Symmetric all-pairs similarity with a unit diagonal; row-major n x n.
inline std::vector<double> similarity_matrix(const std::vector<LabeledGraph>& graphs, const McsOptions& options = {}) {
  const std::size_t n = graphs.size();
  std::vector<double> out(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out[i * n + j] = out[j * n + i] = similarity(graphs[i], graphs[j], options);
  }
  return out;
}

}  // namespace planscore
