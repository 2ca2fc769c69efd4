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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "planscore/gspan.hpp"
#include "planscore/isomorphism.hpp"
#include "planscore/oracles.hpp"

namespace planscore {
namespace {

constexpr int kWbed = category_code(Category::kWbed);
constexpr int kDk = category_code(Category::kDk);
constexpr int kBath = category_code(Category::kBath);
constexpr int kWash = category_code(Category::kWash);
constexpr int kCorri = category_code(Category::kCorri);

LabeledGraph make(const std::vector<int>& labels, const std::vector<std::pair<int, int>>& edges) {
  LabeledGraph g;
  for (int l : labels) g.add_vertex(l);
  for (auto [u, v] : edges) g.add_edge(u, v);
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

std::vector<CorpusGraph> as_corpus(const std::vector<LabeledGraph>& graphs) {
  std::vector<CorpusGraph> corpus;
  for (std::size_t i = 0; i < graphs.size(); ++i) corpus.push_back({"p" + std::to_string(i), graphs[i]});
  return corpus;
}

// Compares mined (class, support set) pairs with the enumeration oracle.
void expect_matches_oracle(const std::vector<LabeledGraph>& graphs, int min_support) {
  MiningOptions options;
  options.min_support = min_support;
  options.max_edges = 64;
  const auto mined = gspan(as_corpus(graphs), options);
  EXPECT_FALSE(mined.edge_cap_hit);
  std::map<std::string, std::vector<int>> got;
  std::set<std::string> codes;
  for (const auto& p : mined.patterns) {
    EXPECT_TRUE(codes.insert(p.code_string).second) << "duplicate " << p.code_string;
    EXPECT_TRUE(got.emplace(oracle::permutation_canonical(code_to_graph(p.code)), p.support_set).second);
  }
  EXPECT_EQ(got, oracle::enumerate_frequent(graphs, min_support));
}

TEST(SubgraphIsomorphic, Identity) {
  const auto g = make({kDk, kWash, kBath, kCorri}, {{0, 1}, {1, 2}, {0, 3}, {1, 3}});
  EXPECT_TRUE(subgraph_isomorphic(g, g));
}

TEST(SubgraphIsomorphic, NeedsDirectEdge) {
  const auto pattern = make({kDk, kBath}, {{0, 1}});
  const auto host = make({kDk, kWash, kBath}, {{0, 1}, {1, 2}});
  EXPECT_FALSE(subgraph_isomorphic(pattern, host));
}

TEST(SubgraphIsomorphic, EdgeKindsIgnored) {
  const auto pattern = make_room_graph("p", {{0, Category::kDk}, {1, Category::kBath}}, {{0, 1, EdgeKind::kOpen}});
  const auto host = make_room_graph("h", {{5, Category::kBath}, {9, Category::kDk}}, {{5, 9, EdgeKind::kDoor}});
  EXPECT_TRUE(subgraph_isomorphic(pattern, host));
}

TEST(SubgraphIsomorphic, NonInduced) {
  const auto path = make({kWbed, kDk, kWbed}, {{0, 1}, {1, 2}});
  const auto triangle = make({kWbed, kDk, kWbed}, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_TRUE(subgraph_isomorphic(path, triangle));
  EXPECT_FALSE(subgraph_isomorphic(triangle, path));
}

TEST(SubgraphIsomorphic, MatchesPermutationOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto host = oracle::random_graph(rng, 3 + static_cast<int>(rng() % 4), {kWbed, kDk, kBath}, 0.5, false);
    const auto pattern = oracle::random_graph(rng, 2 + static_cast<int>(rng() % 3), {kWbed, kDk, kBath}, 0.5, true);
    // Oracle: pattern class is among the host's connected subgraph classes.
    const bool expected = oracle::connected_subgraph_classes(host).contains(oracle::permutation_canonical(pattern));
    EXPECT_EQ(subgraph_isomorphic(pattern, host), expected);
  }
}

TEST(GSpan, IdenticalSingleEdges) {
  const std::vector<LabeledGraph> graphs(5, make({kDk, kBath}, {{0, 1}}));
  MiningOptions options;
  options.min_support = 5;
  const auto r = gspan(as_corpus(graphs), options);
  ASSERT_EQ(r.patterns.size(), 1u);
  EXPECT_EQ(r.patterns[0].support(), 5);
  EXPECT_EQ(r.patterns[0].code_string, "(0,1,dk,-,bath)");
}

TEST(GSpan, ImpossibleSupport) {
  const std::vector<LabeledGraph> graphs(4, make({kDk, kBath}, {{0, 1}}));
  MiningOptions options;
  options.min_support = 5;
  EXPECT_TRUE(gspan(as_corpus(graphs), options).patterns.empty());
}

TEST(GSpan, RejectsZeroSupport) {
  MiningOptions options;
  options.min_support = 0;
  EXPECT_THROW(gspan({}, options), Error);
}

TEST(GSpan, MatchesEnumerationOracle) {
  std::mt19937_64 rng(31337);
  const std::vector<int> labels = {kWbed, kDk, kBath, kCorri};
  for (int corpus = 0; corpus < 6; ++corpus) {
    std::vector<LabeledGraph> graphs;
    for (int i = 0; i < 12; ++i) {
      graphs.push_back(oracle::random_graph(rng, 2 + static_cast<int>(rng() % 5), labels, 0.3, rng() % 3 != 0));
    }
    for (int min_support : {2, 3, 4}) {
      SCOPED_TRACE(testing::Message() << "corpus " << corpus << " support " << min_support);
      expect_matches_oracle(graphs, min_support);
    }
  }
}

TEST(GSpan, AntiMonotoneSupport) {
  std::mt19937_64 rng(4);
  std::vector<LabeledGraph> graphs;
  for (int i = 0; i < 15; ++i) graphs.push_back(oracle::random_graph(rng, 6, {kWbed, kDk, kBath}, 0.3, true));
  MiningOptions options;
  options.min_support = 2;
  options.max_edges = 64;
  const auto r = gspan(as_corpus(graphs), options);
  std::map<std::string, int> support;
  for (const auto& p : r.patterns) support[p.code_string] = p.support();
  for (const auto& p : r.patterns) {
    // Every connected single-edge-deleted sub-pattern is frequent with at least as much support.
    const auto g = code_to_graph(p.code);
    for (int drop = 0; drop < g.edge_count() && g.edge_count() > 1; ++drop) {
      LabeledGraph sub;
      for (int l : g.labels) sub.add_vertex(l);
      for (int e = 0; e < g.edge_count(); ++e) {
        if (e != drop) sub.add_edge(g.edges[e].first, g.edges[e].second);
      }
      std::vector<int> keep;
      for (int v = 0; v < sub.vertex_count(); ++v) {
        if (!sub.adj[v].empty()) keep.push_back(v);
      }
      const auto trimmed = induced_subgraph(sub, keep);
      if (!is_connected(trimmed)) continue;
      const auto it = support.find(canonical_string(trimmed));
      ASSERT_NE(it, support.end());
      EXPECT_GE(it->second, p.support());
    }
  }
}

TEST(GSpan, PruningDoesNotChangeResult) {
  std::mt19937_64 rng(99);
  std::vector<LabeledGraph> graphs;
  for (int i = 0; i < 10; ++i) graphs.push_back(oracle::random_graph(rng, 5, {kWbed, kDk, kBath}, 0.3, true));
  MiningOptions pruned;
  pruned.min_support = 2;
  pruned.max_edges = 64;
  auto unpruned = pruned;
  unpruned.prune_non_minimal = false;
  const auto a = gspan(as_corpus(graphs), pruned);
  const auto b = gspan(as_corpus(graphs), unpruned);
  ASSERT_EQ(a.patterns.size(), b.patterns.size());
  for (std::size_t i = 0; i < a.patterns.size(); ++i) {
    EXPECT_EQ(a.patterns[i].code_string, b.patterns[i].code_string);
    EXPECT_EQ(a.patterns[i].support_set, b.patterns[i].support_set);
  }
}

TEST(GSpan, EdgeCapReported) {
  const std::vector<LabeledGraph> graphs(3, make({kDk, kWash, kBath, kCorri}, {{0, 1}, {1, 2}, {2, 3}}));
  MiningOptions options;
  options.min_support = 3;
  options.max_edges = 2;
  const auto r = gspan(as_corpus(graphs), options);
  EXPECT_TRUE(r.edge_cap_hit);
  for (const auto& p : r.patterns) EXPECT_LE(p.code.size(), 2u);
  options.max_edges = 3;
  EXPECT_FALSE(gspan(as_corpus(graphs), options).edge_cap_hit);
}

}  // namespace
}  // namespace planscore
