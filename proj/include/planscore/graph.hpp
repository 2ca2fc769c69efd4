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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planscore/category.hpp"
#include "planscore/error.hpp"
#include "planscore/raster.hpp"

namespace planscore {

enum class EdgeKind : std::uint8_t { kOpen, kDoor, kWindow };

inline std::string_view edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::kOpen: return "open";
    case EdgeKind::kDoor: return "door";
    case EdgeKind::kWindow: return "window";
  }
  return "open";
}

inline std::optional<EdgeKind> edge_kind_from_name(std::string_view s) {
  if (s == "open") return EdgeKind::kOpen;
  if (s == "door") return EdgeKind::kDoor;
  if (s == "window") return EdgeKind::kWindow;
  return std::nullopt;
}

struct RoomNode {
  int id = 0;
  Category label = Category::kWbed;
  friend bool operator==(const RoomNode&, const RoomNode&) = default;
};

/// Undirected edge stored with a < b.
struct RoomEdge {
  int a = 0;
  int b = 0;
  EdgeKind kind = EdgeKind::kOpen;
  friend bool operator==(const RoomEdge&, const RoomEdge&) = default;
};

/// Node-labeled simple graph of rooms. Construct through `make_room_graph`
/// or `graph_from_json`, which normalize and validate.
struct RoomGraph {
  std::string id;
  std::vector<RoomNode> nodes;
  std::vector<RoomEdge> edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  friend bool operator==(const RoomGraph&, const RoomGraph&) = default;
};

inline RoomGraph make_room_graph(std::string id, std::vector<RoomNode> nodes,
                                 std::vector<RoomEdge> edges) {
  RoomGraph g{std::move(id), std::move(nodes), {}};
  std::set<int> ids;
  for (const auto& n : g.nodes) {
    if (!ids.insert(n.id).second) {
      throw Error(ErrorCode::kInvalidGraph, "graph " + g.id + ": duplicate node id " + std::to_string(n.id));
    }
    if (!is_node_category(n.label)) {
      throw Error(ErrorCode::kInvalidGraph,
                  "graph " + g.id + ": label " + std::string(abbrev(n.label)) + " is not a room");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (auto e : edges) {
    if (e.a == e.b) throw Error(ErrorCode::kInvalidGraph, "graph " + g.id + ": self-loop");
    if (!ids.contains(e.a) || !ids.contains(e.b)) {
      throw Error(ErrorCode::kInvalidGraph, "graph " + g.id + ": dangling edge endpoint");
    }
    if (e.a > e.b) std::swap(e.a, e.b);
    if (!seen.insert({e.a, e.b}).second) {
      throw Error(ErrorCode::kInvalidGraph, "graph " + g.id + ": duplicate edge");
    }
    g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const RoomEdge& x, const RoomEdge& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  return g;
}

inline RoomGraph graph_from_json(const Json& j) {
  try {
    std::vector<RoomNode> nodes;
    for (const auto& n : j.at("nodes")) {
      const auto label = n.at("label").get<std::string>();
      const auto cat = category_from_abbrev(label);
      if (!cat) throw Error(ErrorCode::kInvalidGraph, "unknown label " + label);
      nodes.push_back({n.at("id").get<int>(), *cat});
    }
    std::vector<RoomEdge> edges;
    for (const auto& e : j.at("edges")) {
      const auto kind_name = e.at("kind").get<std::string>();
      const auto kind = edge_kind_from_name(kind_name);
      if (!kind) throw Error(ErrorCode::kInvalidGraph, "unknown edge kind " + kind_name);
      edges.push_back({e.at("a").get<int>(), e.at("b").get<int>(), *kind});
    }
    return make_room_graph(j.at("id").get<std::string>(), std::move(nodes), std::move(edges));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("graph: ") + e.what());
  }
}

inline RoomGraph parse_graph(std::string_view text) { return graph_from_json(parse_json(text, "graph")); }

inline Json graph_to_json(const RoomGraph& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes) nodes.push_back({{"id", n.id}, {"label", abbrev(n.label)}});
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"a", e.a}, {"b", e.b}, {"kind", edge_kind_name(e.kind)}});
  }
  return Json{{"id", g.id}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline std::string serialize_graph(const RoomGraph& g) { return graph_to_json(g).dump(); }

/// Index-based view used by the matching and mining algorithms. Vertex i is
/// the i-th node of the source graph; edge kinds are dropped.
struct LabeledGraph {
  std::vector<int> labels;
  std::vector<std::vector<int>> adj;
  std::vector<std::pair<int, int>> edges;

  int vertex_count() const { return static_cast<int>(labels.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  bool has_edge(int u, int v) const {
    const auto& a = adj[u];
    return std::find(a.begin(), a.end(), v) != a.end();
  }

  void add_vertex(int label) {
    labels.push_back(label);
    adj.emplace_back();
  }
  void add_edge(int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
};

inline LabeledGraph to_labeled(const RoomGraph& g) {
  LabeledGraph lg;
  std::map<int, int> index;
  for (const auto& n : g.nodes) {
    index[n.id] = lg.vertex_count();
    lg.add_vertex(category_code(n.label));
  }
  for (const auto& e : g.edges) lg.add_edge(index.at(e.a), index.at(e.b));
  for (auto& a : lg.adj) std::sort(a.begin(), a.end());
  return lg;
}

/// Inverse of `to_labeled`: node ids are vertex indices, every edge is `open`.
inline RoomGraph from_labeled(const LabeledGraph& lg, std::string id = {}) {
  std::vector<RoomNode> nodes;
  for (int i = 0; i < lg.vertex_count(); ++i) nodes.push_back({i, static_cast<Category>(lg.labels[i])});
  std::vector<RoomEdge> edges;
  for (auto [u, v] : lg.edges) edges.push_back({u, v, EdgeKind::kOpen});
  return make_room_graph(std::move(id), std::move(nodes), std::move(edges));
}

inline bool is_connected(const LabeledGraph& g) {
  if (g.vertex_count() == 0) return false;
  std::vector<bool> seen(g.labels.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    ++visited;
    for (int v : g.adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return visited == g.vertex_count();
}

/// Induced subgraph on `vertices` (in the given order).
inline LabeledGraph induced_subgraph(const LabeledGraph& g, const std::vector<int>& vertices) {
  LabeledGraph out;
  std::vector<int> index(g.labels.size(), -1);
  for (int v : vertices) {
    index[v] = out.vertex_count();
    out.add_vertex(g.labels[v]);
  }
  for (auto [u, v] : g.edges) {
    if (index[u] >= 0 && index[v] >= 0) out.add_edge(index[u], index[v]);
  }
  return out;
}

}  // namespace planscore
