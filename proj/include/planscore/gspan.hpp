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
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "planscore/dfs_code.hpp"
#include "planscore/graph.hpp"

namespace planscore {

/// A graph of the mining corpus, keyed by plan id.
struct CorpusGraph {
  std::string plan_id;
  LabeledGraph graph;
};

/// A frequent connected pattern with its minimum DFS code and the plans
/// (corpus indices, ascending) that contain it.
struct Pattern {
  DfsCode code;
  std::string code_string;
  std::vector<int> support_set;

  int support() const { return static_cast<int>(support_set.size()); }
};

struct MiningOptions {
  int min_support = 5;
  int max_edges = 8;
  /// Disables both the minimum-code check and the root-label filter; the
  /// search then visits every DFS code and dedupes at the end. Testing only.
  bool prune_non_minimal = true;
};

struct MiningResult {
  std::vector<Pattern> patterns;  // sorted by code string
  bool edge_cap_hit = false;
};

namespace detail {

struct MiningEmbedding {
  int graph = 0;
  std::vector<int> map;         // pattern vertex -> host vertex
  std::vector<int> used_edges;  // host edge ids
};

struct DfsEdgeOrder {
  bool operator()(const DfsEdge& a, const DfsEdge& b) const { return dfs_edge_less(a, b); }
};

class GSpanMiner {
 public:
  GSpanMiner(const std::vector<CorpusGraph>& corpus, MiningOptions options)
      : corpus_(corpus), options_(options) {
    edge_ids_.reserve(corpus.size());
    for (const auto& cg : corpus) edge_ids_.push_back(edge_id_matrix(cg.graph));
  }

  MiningResult run() {
    std::map<DfsEdge, std::vector<MiningEmbedding>, DfsEdgeOrder> roots;
    for (int gi = 0; gi < static_cast<int>(corpus_.size()); ++gi) {
      const auto& g = corpus_[gi].graph;
      const int n = g.vertex_count();
      for (auto [u, v] : g.edges) {
        for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
          if (options_.prune_non_minimal && g.labels[a] > g.labels[b]) continue;
          DfsEdge key{0, 1, g.labels[a], EdgeLabel::kAny, g.labels[b]};
          roots[key].push_back({gi, {a, b}, {edge_ids_[gi][a * n + b]}});
        }
      }
    }
    DfsCode code;
    for (auto& [edge, embs] : roots) {
      code.edges = {edge};
      project(code, embs);
    }
    MiningResult result;
    result.edge_cap_hit = cap_hit_;
    for (auto& [key, pattern] : found_) result.patterns.push_back(std::move(pattern));
    return result;
  }

 private:
  static std::vector<int> support_of(const std::vector<MiningEmbedding>& embs) {
    std::vector<int> graphs;
    for (const auto& e : embs) {
      if (graphs.empty() || graphs.back() != e.graph) graphs.push_back(e.graph);
    }
    graphs.erase(std::unique(graphs.begin(), graphs.end()), graphs.end());
    return graphs;
  }

  void emit(const DfsCode& code, std::vector<int> support) {
    Pattern p;
    p.code = options_.prune_non_minimal ? code : min_dfs_code(code_to_graph(code));
    p.code_string = serialize_dfs_code(p.code);
    p.support_set = std::move(support);
    found_.try_emplace(p.code_string, std::move(p));
  }

  void project(DfsCode& code, const std::vector<MiningEmbedding>& embs) {
    auto support = support_of(embs);
    if (static_cast<int>(support.size()) < options_.min_support) return;
    if (options_.prune_non_minimal && !is_min_dfs_code(code)) return;
    emit(code, std::move(support));

    auto extensions = extend(code, embs);
    if (static_cast<int>(code.size()) >= options_.max_edges) {
      for (const auto& [edge, next] : extensions) {
        if (static_cast<int>(support_of(next).size()) >= options_.min_support) {
          cap_hit_ = true;
          break;
        }
      }
      return;
    }
    for (auto& [edge, next] : extensions) {
      code.edges.push_back(edge);
      project(code, next);
      code.edges.pop_back();
    }
  }

  std::map<DfsEdge, std::vector<MiningEmbedding>, DfsEdgeOrder> extend(
      const DfsCode& code, const std::vector<MiningEmbedding>& embs) const {
    std::map<DfsEdge, std::vector<MiningEmbedding>, DfsEdgeOrder> out;
    const auto rmpath = code.rightmost_path();
    const int rm = rmpath.back();
    const int next_vertex = code.vertex_count();
    const int min_label = options_.prune_non_minimal ? code.edges.front().from_label : 0;
    for (const auto& e : embs) {
      const auto& g = corpus_[e.graph].graph;
      const auto& ids = edge_ids_[e.graph];
      const int n = g.vertex_count();
      auto mapped = [&](int hv) { return std::find(e.map.begin(), e.map.end(), hv) != e.map.end(); };
      auto used = [&](int id) {
        return std::find(e.used_edges.begin(), e.used_edges.end(), id) != e.used_edges.end();
      };
      const int h_rm = e.map[rm];
      for (int v : rmpath) {
        if (v == rm) break;
        const int id = ids[h_rm * n + e.map[v]];
        if (id < 0 || used(id)) continue;
        DfsEdge key{rm, v, g.labels[h_rm], EdgeLabel::kAny, g.labels[e.map[v]]};
        auto grown = e;
        grown.used_edges.push_back(id);
        out[key].push_back(std::move(grown));
      }
      for (auto it = rmpath.rbegin(); it != rmpath.rend(); ++it) {
        const int src = *it;
        const int h_src = e.map[src];
        for (int w : g.adj[h_src]) {
          if (g.labels[w] < min_label || mapped(w)) continue;
          DfsEdge key{src, next_vertex, g.labels[h_src], EdgeLabel::kAny, g.labels[w]};
          auto grown = e;
          grown.map.push_back(w);
          grown.used_edges.push_back(ids[h_src * n + w]);
          out[key].push_back(std::move(grown));
        }
      }
    }
    return out;
  }

  const std::vector<CorpusGraph>& corpus_;
  MiningOptions options_;
  std::vector<std::vector<int>> edge_ids_;
  std::map<std::string, Pattern> found_;
  bool cap_hit_ = false;
};

}  // namespace detail

/// Frequent connected subgraph mining. Support is the number of distinct
/// corpus graphs containing the pattern; every pattern with at least one
/// edge, at most `max_edges` edges and support >= `min_support` is returned
/// once under its minimum DFS code.
inline MiningResult gspan(const std::vector<CorpusGraph>& corpus, const MiningOptions& options) {
  if (options.min_support < 1) throw Error(ErrorCode::kInvalidQuery, "min_support must be >= 1");
  return detail::GSpanMiner(corpus, options).run();
}

}  // namespace planscore
