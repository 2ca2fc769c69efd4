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


#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <random>

#include "planscore/extract.hpp"
#include "planscore/mcs.hpp"
#include "planscore/oracles.hpp"
#include "planscore/synth.hpp"
#include "planscore/wet_area.hpp"

namespace planscore {
namespace {

using C = Category;

RoomGraph room_graph(std::vector<C> labels, std::vector<std::pair<int, int>> edges) {
  std::vector<RoomNode> nodes;
  for (std::size_t i = 0; i < labels.size(); ++i) nodes.push_back({static_cast<int>(i), labels[i]});
  std::vector<RoomEdge> es;
  for (auto [a, b] : edges) es.push_back({a, b, EdgeKind::kDoor});
  return make_room_graph("g", nodes, es);
}

std::vector<int> node_ids(const RoomGraph& g) {
  std::vector<int> out;
  for (const auto& n : g.nodes) out.push_back(n.id);
  return out;
}

TEST(WetSubgraph, ChainWithoutBridges) {
  // wc - wash - bath, dk - wash, plus a bedroom and corridor
  const auto g = room_graph({C::kWc, C::kWash, C::kBath, C::kDk, C::kWbed, C::kCorri},
                            {{0, 1}, {1, 2}, {3, 1}, {3, 5}, {4, 5}});
  const auto w = wet_subgraph(g);
  EXPECT_EQ(node_ids(w.graph), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_TRUE(w.bridges.empty());
  EXPECT_EQ(w.graph.edge_count(), 3u);
  EXPECT_FALSE(w.disconnected);
}

TEST(WetSubgraph, PrefersCommunalBridge) {
  // dk and bath joined through either a corridor or a bedroom
  const auto g = room_graph({C::kDk, C::kWbed, C::kCorri, C::kBath}, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  const auto w = wet_subgraph(g);
  EXPECT_EQ(w.bridges, std::vector<int>{2});
  // same with the bedroom given the smaller id and ent vs stairs
  const auto h = room_graph({C::kDk, C::kStairs, C::kEnt, C::kBath}, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  EXPECT_EQ(wet_subgraph(h).bridges, std::vector<int>{2});
  // no communal option: lowest id wins
  const auto k = room_graph({C::kDk, C::kJbed, C::kWbed, C::kBath}, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  EXPECT_EQ(wet_subgraph(k).bridges, std::vector<int>{1});
}

TEST(WetSubgraph, Errors) {
  try {
    wet_subgraph(room_graph({C::kWbed, C::kCorri}, {{0, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoWetRooms);
  }
}

TEST(WetSubgraph, DisconnectedUnion) {
  const auto g = room_graph({C::kDk, C::kCorri, C::kBath, C::kWc, C::kWbed}, {{0, 1}, {1, 2}, {3, 4}});
  const auto w = wet_subgraph(g);
  EXPECT_TRUE(w.disconnected);
  EXPECT_EQ(node_ids(w.graph), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(component_code(to_labeled(w.graph)), "(0,1,dk,-,corri);(1,2,corri,-,bath) + [wc]");
}

TEST(WetSubgraph, SteinerOracle) {
  std::mt19937_64 rng(8);
  const std::vector<int> labels{1, 3, 3, 5, 6, 7, 8, 9, 9, 10};  // dk=3 twice-weighted
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = trial < 200 ? 8 : 10;
    auto lg = oracle::random_graph(rng, n, labels, 0.18, true);
    std::vector<int> terminals;
    for (int v = 0; v < n; ++v) {
      if (is_wet_category(static_cast<Category>(lg.labels[v]))) terminals.push_back(v);
    }
    if (terminals.empty()) continue;
    const auto g = from_labeled(lg, "t");
    const auto w = wet_subgraph(g);
    const int want = oracle::min_steiner_vertices(lg, terminals);
    ASSERT_GE(want, 0);
    if (want > kMaxExactBridges) continue;
    ++checked;
    EXPECT_FALSE(w.approximate);
    EXPECT_EQ(static_cast<int>(w.bridges.size()), want) << trial;
    EXPECT_TRUE(is_connected(to_labeled(w.graph)));
    // every wet node kept
    const auto kept = node_ids(w.graph);
    for (int t : terminals) EXPECT_TRUE(std::binary_search(kept.begin(), kept.end(), t));
    // no strict subset of the bridges connects: dropping any one disconnects
    for (std::size_t drop = 0; drop < w.bridges.size(); ++drop) {
      std::vector<int> keep = terminals;
      for (std::size_t i = 0; i < w.bridges.size(); ++i) {
        if (i != drop) keep.push_back(w.bridges[i]);
      }
      std::sort(keep.begin(), keep.end());
      EXPECT_FALSE(is_connected(induced_subgraph(lg, keep)));
    }
  }
  EXPECT_GT(checked, 150);
}

TEST(WetSubgraph, GreedyFallbackIsMinimal) {
  // dk and bath at the ends of a long corridor chain need 6 bridges
  std::vector<C> labels{C::kDk};
  for (int i = 0; i < 6; ++i) labels.push_back(C::kCorri);
  labels.push_back(C::kBath);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 7; ++i) edges.emplace_back(i, i + 1);
  const auto w = wet_subgraph(room_graph(labels, edges));
  EXPECT_TRUE(w.approximate);
  EXPECT_EQ(w.bridges.size(), 6u);
  EXPECT_TRUE(is_connected(to_labeled(w.graph)));
}

TEST(WetVocab, IdenticalPlans) {
  const auto g = room_graph({C::kDk, C::kBath, C::kWbed}, {{0, 1}, {0, 2}});
  const auto v = build_wet_vocab({g, g, g});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, "(0,1,dk,-,bath)");
  EXPECT_EQ(v[0].frequency, 3);
  EXPECT_EQ(encode_wet(g, v), std::vector<std::uint8_t>{1});
  EXPECT_EQ(read_wet_vocab(write_wet_vocab(v))[0].code, v[0].code);
}

TEST(WetVocab, FrequencyOracleAndCounting) {
  std::vector<RoomGraph> graphs;
  for (const auto& p : generate_corpus(30, 5)) graphs.push_back(build_graph(p));
  std::map<std::string, int> count;
  for (const auto& g : graphs) count[wet_code(g)]++;
  const auto v = build_wet_vocab(graphs);
  std::vector<std::pair<int, std::string>> want;
  for (const auto& [code, c] : count) {
    if (c > 1) want.emplace_back(-c, code);
  }
  std::sort(want.begin(), want.end());
  ASSERT_EQ(v.size(), want.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v[i].code, want[i].second);
    EXPECT_EQ(v[i].frequency, -want[i].first);
  }
  std::vector<int> sums(v.size(), 0);
  int out_of_vocab = 0;
  for (const auto& g : graphs) {
    const auto e = encode_wet(g, v);
    const int ones = static_cast<int>(std::count(e.begin(), e.end(), 1));
    EXPECT_LE(ones, 1);
    out_of_vocab += ones == 0;
    for (std::size_t i = 0; i < e.size(); ++i) sums[i] += e[i];
  }
  int total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(sums[i], v[i].frequency);
    total += v[i].frequency;
  }
  EXPECT_EQ(total, 30 - out_of_vocab);
}

TEST(WetVocab, UniqueTypeEncodesZero) {
  const auto a = room_graph({C::kDk, C::kBath}, {{0, 1}});
  const auto b = room_graph({C::kDk, C::kWc}, {{0, 1}});
  const auto v = build_wet_vocab({a, a, b});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(encode_wet(b, v), std::vector<std::uint8_t>{0});
  EXPECT_EQ(encode_wet(room_graph({C::kWbed}, {}), v), std::vector<std::uint8_t>{0});
  EXPECT_THROW(build_wet_vocab({room_graph({C::kWbed}, {})}), Error);
}

TEST(WetVocab, ChainPenaltyLowersQ5) {
  auto corpus = generate_corpus(200, 13);
  auto hidden = HiddenScoreModel::make(13);
  hidden.calibrate(corpus);
  const auto chain = PlantedPatterns::standard().wet_chain;
  double with = 0, without = 0;
  int nw = 0, nwo = 0;
  for (const auto& p : corpus) {
    const auto wet = to_labeled(wet_subgraph(build_graph(p)).graph);
    const double q5 = hidden.truth(p)[4];
    if (subgraph_isomorphic(chain, wet)) with += q5, ++nw;
    else without += q5, ++nwo;
  }
  ASSERT_GT(nw, 5);
  ASSERT_GT(nwo, 5);
  EXPECT_LT(with / nw, without / nwo);
}

TEST(Mcs, Examples) {
  const auto p3 = to_labeled(room_graph({C::kWbed, C::kDk, C::kBath}, {{0, 1}, {1, 2}}));
  const auto p2 = to_labeled(room_graph({C::kWbed, C::kDk}, {{0, 1}}));
  const auto m = mcs_size(p3, p2);
  EXPECT_EQ(m.nodes, 2);
  EXPECT_EQ(m.edges, 1);
  EXPECT_DOUBLE_EQ(similarity(p3, p2), 0.6);
  EXPECT_DOUBLE_EQ(similarity(p3, p3), 1.0);
  const auto a = to_labeled(room_graph({C::kWbed}, {}));
  const auto b = to_labeled(room_graph({C::kDk}, {}));
  EXPECT_EQ(similarity(a, b), 0.0);
  EXPECT_EQ(mcs_size(a, b).nodes, 0);
  try {
    similarity(LabeledGraph{}, LabeledGraph{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBothEmpty);
  }
  EXPECT_EQ(similarity(LabeledGraph{}, a), 0.0);
}

TEST(Mcs, BruteForceOracle) {
  std::mt19937_64 rng(21);
  const std::vector<int> labels{1, 3, 5, 9};
  std::vector<LabeledGraph> graphs;
  for (int i = 0; i < 40; ++i) {
    graphs.push_back(oracle::random_graph(rng, 1 + static_cast<int>(rng() % 6), labels, 0.4, rng() % 2 == 0));
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      const auto got = mcs_size(graphs[i], graphs[j]);
      const auto want = oracle::mcs_size(graphs[i], graphs[j]);
      ASSERT_EQ(std::pair(got.nodes, got.edges), want) << i << "," << j;
      EXPECT_FALSE(got.approximate);
      EXPECT_NEAR(similarity(graphs[i], graphs[j]), similarity(graphs[j], graphs[i]), 1e-12);
    }
  }
}

TEST(Mcs, SubgraphMonotonicity) {
  std::mt19937_64 rng(4);
  const std::vector<int> labels{1, 3, 5, 9};
  for (int t = 0; t < 100; ++t) {
    const auto b = oracle::random_graph(rng, 7, labels, 0.3, true);
    std::vector<int> keep;
    for (int v = 0; v < 7; ++v) {
      if (rng() % 2) keep.push_back(v);
    }
    if (keep.empty()) continue;
    const auto a = induced_subgraph(b, keep);
    const double want = static_cast<double>(a.vertex_count() + a.edge_count()) / (b.vertex_count() + b.edge_count());
    EXPECT_NEAR(similarity(a, b), want, 1e-12);
  }
}

TEST(Mcs, SimilarityVectorAndMatrix) {
  std::mt19937_64 rng(6);
  const std::vector<int> labels{1, 3, 5};
  std::vector<LabeledGraph> refs;
  for (int i = 0; i < 10; ++i) refs.push_back(oracle::random_graph(rng, 2 + i % 4, labels, 0.4, true));
  for (int q = 0; q < 3; ++q) {
    const auto g = oracle::random_graph(rng, 4, labels, 0.4, true);
    const auto v = similarity_vector(g, refs);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const auto [n, e] = oracle::mcs_size(g, refs[i]);
      const double want = static_cast<double>(n + e) /
                          std::max(g.vertex_count() + g.edge_count(), refs[i].vertex_count() + refs[i].edge_count());
      EXPECT_NEAR(v[i], want, 1e-12);
    }
  }
  EXPECT_EQ(similarity_vector(refs[0], {refs[0]}), std::vector<double>{1.0});
  const auto disjoint = to_labeled(room_graph({C::kCl, C::kCl}, {{0, 1}}));
  for (double s : similarity_vector(disjoint, refs)) EXPECT_EQ(s, 0.0);
  const auto m = similarity_matrix(refs);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    EXPECT_EQ(m[i * refs.size() + i], 1.0);
    for (std::size_t j = 0; j < refs.size(); ++j) EXPECT_EQ(m[i * refs.size() + j], similarity(refs[i], refs[j]));
  }
}

TEST(Mcs, CapFallbackFlagged) {
  std::mt19937_64 rng(2);
  const std::vector<int> labels{1, 1, 1, 3, 9, 10};
  const auto a = oracle::random_graph(rng, 16, labels, 0.2, true);
  McsOptions tight;
  tight.step_budget = 10;
  const auto r = mcs_size(a, oracle::permute(a, oracle::random_permutation(rng, 16)), tight);
  EXPECT_EQ(r.nodes, 16);
  EXPECT_LE(r.edges, a.edge_count());
  const auto same = mcs_size(a, a, tight);
  EXPECT_EQ(same.edges, a.edge_count());
  EXPECT_FALSE(same.approximate);
}

TEST(Mcs, PlanPairsAreFast) {
  std::vector<LabeledGraph> graphs;
  for (const auto& p : generate_corpus(60, 9)) graphs.push_back(to_labeled(build_graph(p)));
  const auto t0 = std::chrono::steady_clock::now();
  int approx = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::size_t j = i + 1; j < graphs.size(); ++j) approx += mcs_size(graphs[i], graphs[j]).approximate;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RecordProperty("seconds", std::to_string(secs));
  RecordProperty("approximate", approx);
  EXPECT_LT(secs, 20.0);
}

}  // namespace
}  // namespace planscore
