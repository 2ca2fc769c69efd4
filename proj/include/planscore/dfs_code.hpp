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
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "planscore/category.hpp"
#include "planscore/error.hpp"
#include "planscore/graph.hpp"

namespace planscore {

/// Edge label carried by a DFS code tuple. Mined and canonical codes always
/// use kAny because matching ignores the kind of opening.
enum class EdgeLabel : std::uint8_t { kAny, kOpen, kDoor, kWindow };

inline std::string_view edge_label_name(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::kAny: return "-";
    case EdgeLabel::kOpen: return "open";
    case EdgeLabel::kDoor: return "door";
    case EdgeLabel::kWindow: return "window";
  }
  return "-";
}

inline std::optional<EdgeLabel> edge_label_from_name(std::string_view s) {
  if (s == "-") return EdgeLabel::kAny;
  if (s == "open") return EdgeLabel::kOpen;
  if (s == "door") return EdgeLabel::kDoor;
  if (s == "window") return EdgeLabel::kWindow;
  return std::nullopt;
}

/// One 5-tuple (from, to, from_label, edge_label, to_label) of a DFS code.
struct DfsEdge {
  int from = 0;
  int to = 0;
  int from_label = 0;
  EdgeLabel edge_label = EdgeLabel::kAny;
  int to_label = 0;

  bool forward() const { return from < to; }

  /// Equality that ignores the edge label.
  bool same_shape(const DfsEdge& o) const {
    return from == o.from && to == o.to && from_label == o.from_label && to_label == o.to_label;
  }
  friend bool operator==(const DfsEdge&, const DfsEdge&) = default;
};

/// gSpan's linear order on DFS edges; edge labels do not participate.
inline bool dfs_edge_less(const DfsEdge& a, const DfsEdge& b) {
  const bool af = a.forward();
  const bool bf = b.forward();
  if (af && bf) {
    if (a.to != b.to) return a.to < b.to;
    if (a.from != b.from) return a.from > b.from;
  } else if (!af && !bf) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
  } else if (!af && bf) {
    return a.from < b.to;
  } else {
    return a.to <= b.from;
  }
  return std::tie(a.from_label, a.to_label) < std::tie(b.from_label, b.to_label);
}

struct DfsCode {
  std::vector<DfsEdge> edges;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }

  int vertex_count() const {
    int n = 0;
    for (const auto& e : edges) n = std::max({n, e.from + 1, e.to + 1});
    return n;
  }

  /// Pattern vertices on the path from the root to the rightmost vertex,
  /// root first.
  std::vector<int> rightmost_path() const {
    std::vector<int> path;
    if (edges.empty()) return path;
    int current = vertex_count() - 1;
    path.push_back(current);
    while (current != 0) {
      for (const auto& e : edges) {
        if (e.forward() && e.to == current) {
          current = e.from;
          break;
        }
      }
      path.push_back(current);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  bool same_shape(const DfsCode& o) const {
    if (edges.size() != o.edges.size()) return false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edges[i].same_shape(o.edges[i])) return false;
    }
    return true;
  }

  friend bool operator==(const DfsCode&, const DfsCode&) = default;
};

/// Builds the pattern graph a code describes (vertex i = discovery index i).
inline LabeledGraph code_to_graph(const DfsCode& code) {
  LabeledGraph g;
  const int n = code.vertex_count();
  g.labels.assign(n, 0);
  g.adj.assign(n, {});
  for (const auto& e : code.edges) {
    g.labels[e.from] = e.from_label;
    g.labels[e.to] = e.to_label;
    g.add_edge(e.from, e.to);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

namespace detail {

struct CanonicalEmbedding {
  std::vector<int> map;        // pattern vertex -> graph vertex
  std::vector<int> inverse;    // graph vertex -> pattern vertex or -1
  std::vector<bool> used;      // graph edge ids already in the code
};

inline std::vector<int> edge_id_matrix(const LabeledGraph& g) {
  const int n = g.vertex_count();
  std::vector<int> ids(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < g.edge_count(); ++i) {
    auto [u, v] = g.edges[i];
    ids[u * n + v] = i;
    ids[v * n + u] = i;
  }
  return ids;
}

}  // namespace detail

/// Grows the minimum DFS code of `g` edge by edge. When `target` is given the
/// search stops at the first position where the minimum differs from it and
/// returns the (partial) minimum built so far.
inline DfsCode build_min_code(const LabeledGraph& g, const DfsCode* target = nullptr) {
  const int n = g.vertex_count();
  const int m = g.edge_count();
  const auto eid = detail::edge_id_matrix(g);

  int best_from = -1;
  int best_to = -1;
  for (auto [u, v] : g.edges) {
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      if (best_from < 0 || std::pair(g.labels[a], g.labels[b]) < std::pair(best_from, best_to)) {
        best_from = g.labels[a];
        best_to = g.labels[b];
      }
    }
  }

  DfsCode code;
  std::vector<detail::CanonicalEmbedding> embs;
  for (auto [u, v] : g.edges) {
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      if (g.labels[a] != best_from || g.labels[b] != best_to) continue;
      detail::CanonicalEmbedding e;
      e.map = {a, b};
      e.inverse.assign(n, -1);
      e.inverse[a] = 0;
      e.inverse[b] = 1;
      e.used.assign(m, false);
      e.used[eid[a * n + b]] = true;
      embs.push_back(std::move(e));
    }
  }
  code.edges.push_back({0, 1, best_from, EdgeLabel::kAny, best_to});
  auto diverged = [&]() {
    if (target == nullptr) return false;
    const auto k = code.edges.size() - 1;
    return k >= target->edges.size() || !code.edges[k].same_shape(target->edges[k]);
  };
  if (diverged()) return code;

  while (static_cast<int>(code.edges.size()) < m) {
    const auto rmpath = code.rightmost_path();
    const int rm = rmpath.back();
    const int next_vertex = static_cast<int>(embs.front().map.size());

    // Backward edges from the rightmost vertex, smallest target first.
    int back_to = -1;
    for (const auto& e : embs) {
      for (int v : rmpath) {
        if (v == rm || (back_to >= 0 && v >= back_to)) break;
        const int id = eid[e.map[rm] * n + e.map[v]];
        if (id >= 0 && !e.used[id]) {
          back_to = v;
          break;
        }
      }
    }
    if (back_to >= 0) {
      std::vector<detail::CanonicalEmbedding> next;
      for (auto& e : embs) {
        const int id = eid[e.map[rm] * n + e.map[back_to]];
        if (id >= 0 && !e.used[id]) {
          e.used[id] = true;
          next.push_back(std::move(e));
        }
      }
      embs = std::move(next);
      code.edges.push_back({rm, back_to, g.labels[embs.front().map[rm]], EdgeLabel::kAny,
                            g.labels[embs.front().map[back_to]]});
      if (diverged()) return code;
      continue;
    }

    // Forward edges: deepest rightmost-path vertex first, then smallest label.
    bool extended = false;
    for (auto it = rmpath.rbegin(); it != rmpath.rend() && !extended; ++it) {
      const int src = *it;
      int min_label = -1;
      for (const auto& e : embs) {
        for (int w : g.adj[e.map[src]]) {
          if (e.inverse[w] >= 0) continue;
          if (min_label < 0 || g.labels[w] < min_label) min_label = g.labels[w];
        }
      }
      if (min_label < 0) continue;
      std::vector<detail::CanonicalEmbedding> next;
      for (const auto& e : embs) {
        for (int w : g.adj[e.map[src]]) {
          if (e.inverse[w] >= 0 || g.labels[w] != min_label) continue;
          auto grown = e;
          grown.map.push_back(w);
          grown.inverse[w] = next_vertex;
          grown.used[eid[e.map[src] * n + w]] = true;
          next.push_back(std::move(grown));
        }
      }
      embs = std::move(next);
      code.edges.push_back({src, next_vertex, g.labels[embs.front().map[src]], EdgeLabel::kAny, min_label});
      extended = true;
    }
    if (!extended) {
      throw Error(ErrorCode::kDisconnectedGraph, "graph is not connected");
    }
    if (diverged()) return code;
  }
  return code;
}

/// Canonical (lexicographically minimal) DFS code of a connected graph.
inline DfsCode min_dfs_code(const LabeledGraph& g) {
  if (g.edge_count() == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no edges");
  if (!is_connected(g)) throw Error(ErrorCode::kDisconnectedGraph, "graph is not connected");
  return build_min_code(g);
}

inline DfsCode min_dfs_code(const RoomGraph& g) { return min_dfs_code(to_labeled(g)); }

/// Checks the rightmost-extension grammar: first edge (0,1), forward edges
/// add vertex n from the rightmost path, backward edges leave the rightmost
/// vertex, labels are consistent, and tuples are strictly increasing.
inline bool is_valid_dfs_code(const DfsCode& code, std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why != nullptr) *why = std::move(msg);
    return false;
  };
  if (code.empty()) return fail("empty code");
  const auto& first = code.edges.front();
  if (first.from != 0 || first.to != 1) return fail("first tuple must be (0,1,...)");
  std::vector<int> labels{first.from_label, first.to_label};
  std::vector<int> parent{-1, 0};
  std::vector<std::pair<int, int>> seen{{0, 1}};
  for (int l : labels) {
    if (!valid_category_code(l)) return fail("label out of range");
  }
  for (std::size_t k = 1; k < code.edges.size(); ++k) {
    const auto& e = code.edges[k];
    if (!dfs_edge_less(code.edges[k - 1], e)) return fail("tuple " + std::to_string(k) + " out of order");
    const int n = static_cast<int>(labels.size());
    const int rm = n - 1;
    std::vector<int> rmpath;
    for (int v = rm; v >= 0; v = parent[v]) rmpath.push_back(v);
    auto on_path = [&](int v) { return std::find(rmpath.begin(), rmpath.end(), v) != rmpath.end(); };
    if (e.from < 0 || e.to < 0) return fail("negative index");
    if (e.forward()) {
      if (e.to != n) return fail("forward tuple must discover vertex " + std::to_string(n));
      if (!on_path(e.from)) return fail("forward tuple leaves the rightmost path");
      if (labels[e.from] != e.from_label) return fail("label mismatch");
      if (!valid_category_code(e.to_label)) return fail("label out of range");
      labels.push_back(e.to_label);
      parent.push_back(e.from);
    } else {
      if (e.from != rm) return fail("backward tuple must start at the rightmost vertex");
      if (!on_path(e.to) || e.to == rm) return fail("backward tuple must end on the rightmost path");
      if (labels[e.from] != e.from_label || labels[e.to] != e.to_label) return fail("label mismatch");
    }
    const auto key = std::pair(std::min(e.from, e.to), std::max(e.from, e.to));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return fail("duplicate edge");
    seen.push_back(key);
  }
  return true;
}

/// True iff `code` is a valid DFS code and the minimum one for its graph.
inline bool is_min_dfs_code(const DfsCode& code) {
  if (!is_valid_dfs_code(code)) return false;
  const auto min = build_min_code(code_to_graph(code), &code);
  return min.same_shape(code);
}

inline std::string serialize_dfs_code(const DfsCode& code) {
  std::string why;
  if (!is_valid_dfs_code(code, &why)) throw Error(ErrorCode::kInvalidCode, why);
  if (!is_min_dfs_code(code)) throw Error(ErrorCode::kInvalidCode, "code is not minimal");
  std::string out;
  for (std::size_t k = 0; k < code.edges.size(); ++k) {
    const auto& e = code.edges[k];
    if (k > 0) out += ';';
    out += '(';
    out += std::to_string(e.from);
    out += ',';
    out += std::to_string(e.to);
    out += ',';
    out += abbrev(static_cast<Category>(e.from_label));
    out += ',';
    out += edge_label_name(e.edge_label);
    out += ',';
    out += abbrev(static_cast<Category>(e.to_label));
    out += ')';
  }
  return out;
}

inline DfsCode parse_dfs_code(std::string_view text) {
  DfsCode code;
  std::size_t pos = 0;
  auto bad = [&](const std::string& msg) {
    return Error(ErrorCode::kInvalidCode, msg + " in '" + std::string(text) + "'");
  };
  while (pos < text.size()) {
    if (text[pos] != '(') throw bad("expected '('");
    const auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw bad("missing ')'");
    const auto body = text.substr(pos + 1, close - pos - 1);
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i == body.size() || body[i] == ',') {
        parts.push_back(body.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.size() != 5) throw bad("tuple needs 5 fields");
    auto to_int = [&](std::string_view s) {
      if (s.empty()) throw bad("empty index");
      int v = 0;
      for (char c : s) {
        if (c < '0' || c > '9') throw bad("bad index");
        v = v * 10 + (c - '0');
      }
      return v;
    };
    auto to_label = [&](std::string_view s) {
      const auto c = category_from_abbrev(s);
      if (!c || !is_node_category(*c)) throw bad("bad label '" + std::string(s) + "'");
      return category_code(*c);
    };
    const auto elabel = edge_label_from_name(parts[3]);
    if (!elabel) throw bad("bad edge label");
    code.edges.push_back({to_int(parts[0]), to_int(parts[1]), to_label(parts[2]), *elabel, to_label(parts[4])});
    pos = close + 1;
    if (pos < text.size()) {
      if (text[pos] != ';') throw bad("expected ';'");
      ++pos;
      if (pos == text.size()) throw bad("trailing ';'");
    }
  }
  std::string why;
  if (!is_valid_dfs_code(code, &why)) throw bad(why);
  if (!is_min_dfs_code(code)) throw bad("code is not minimal");
  return code;
}

/// Canonical identity string of a connected graph with at least one edge.
inline std::string canonical_string(const LabeledGraph& g) { return serialize_dfs_code(min_dfs_code(g)); }
inline std::string canonical_string(const RoomGraph& g) { return canonical_string(to_labeled(g)); }

}  // namespace planscore
