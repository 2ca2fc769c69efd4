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
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "planscore/dfs_code.hpp"
#include "planscore/error.hpp"
#include "planscore/graph.hpp"

namespace planscore {

/// Wet rooms plus the bridging rooms that join them.
struct WetArea {
  RoomGraph graph;
  std::vector<int> bridges;   // node ids, ascending
  bool disconnected = false;  // wet rooms lie in different graph components
  bool approximate = false;   // a component needed more than kMaxExactBridges
};

inline constexpr int kMaxExactBridges = 4;

namespace detail {

inline bool connects(const LabeledGraph& g, const std::vector<char>& in, int start) {
  std::vector<char> seen(g.labels.size(), 0);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w : g.adj[static_cast<std::size_t>(u)]) {
      if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < in.size(); ++v) {
    if (in[v] && !seen[v]) return false;
  }
  return true;
}

/// Preference key of a bridge set: more corri, then ent, then stairs; then
/// the lexicographically smallest sorted id list.
struct BridgeKey {
  std::array<int, 3> communal{};
  std::vector<int> ids;

  bool better_than(const BridgeKey& o) const {
    if (communal != o.communal) return communal > o.communal;
    return ids < o.ids;
  }
};

inline BridgeKey bridge_key(const LabeledGraph& g, const std::vector<int>& ids, const std::vector<int>& set) {
  BridgeKey k;
  for (int v : set) {
    const auto c = static_cast<Category>(g.labels[static_cast<std::size_t>(v)]);
    if (c == Category::kCorri) ++k.communal[0];
    if (c == Category::kEnt) ++k.communal[1];
    if (c == Category::kStairs) ++k.communal[2];
    k.ids.push_back(ids[static_cast<std::size_t>(v)]);
  }
  std::sort(k.ids.begin(), k.ids.end());
  return k;
}

/// Minimum bridge set for the terminals of one connected component.
/// Returns false when more than kMaxExactBridges are needed; `out` then holds
/// a greedy, inclusion-minimal set.
inline bool steiner_bridges(const LabeledGraph& g, const std::vector<int>& ids, const std::vector<int>& terminals,
                            const std::vector<int>& candidates, std::vector<int>& out) {
  std::vector<char> in(g.labels.size(), 0);
  for (int t : terminals) in[static_cast<std::size_t>(t)] = 1;
  if (connects(g, in, terminals.front())) {
    out.clear();
    return true;
  }
  const int m = static_cast<int>(candidates.size());
  for (int k = 1; k <= std::min(kMaxExactBridges, m); ++k) {
    bool found = false;
    BridgeKey best;
    std::vector<int> best_set;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<int> set;
      for (int i : pick) {
        set.push_back(candidates[static_cast<std::size_t>(i)]);
        in[static_cast<std::size_t>(candidates[static_cast<std::size_t>(i)])] = 1;
      }
      if (connects(g, in, terminals.front())) {
        auto key = bridge_key(g, ids, set);
        if (!found || key.better_than(best)) {
          best = std::move(key);
          best_set = set;
          found = true;
        }
      }
      for (int v : set) in[static_cast<std::size_t>(v)] = 0;
      int i = k - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (found) {
      out = best_set;
      return true;
    }
  }
  // greedy: grow along shortest paths from the terminal cluster, then drop
  // any bridge that is not needed
  std::vector<int> chosen;
  while (!connects(g, in, terminals.front())) {
    // BFS from the component of terminals.front() through any vertex
    std::vector<int> dist(g.labels.size(), -1);
    std::vector<int> parent(g.labels.size(), -1);
    std::vector<int> queue;
    std::vector<char> reach(g.labels.size(), 0);
    std::vector<int> stack{terminals.front()};
    reach[static_cast<std::size_t>(terminals.front())] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      queue.push_back(u);
      dist[static_cast<std::size_t>(u)] = 0;
      for (int w : g.adj[static_cast<std::size_t>(u)]) {
        if (in[static_cast<std::size_t>(w)] && !reach[static_cast<std::size_t>(w)]) {
          reach[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    int target = -1;
    for (std::size_t h = 0; h < queue.size() && target < 0; ++h) {
      const int u = queue[h];
      for (int w : g.adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(w)] >= 0) continue;
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        parent[static_cast<std::size_t>(w)] = u;
        if (in[static_cast<std::size_t>(w)]) {
          target = w;
          break;
        }
        queue.push_back(w);
      }
    }
    for (int v = parent[static_cast<std::size_t>(target)]; v >= 0 && !reach[static_cast<std::size_t>(v)];
         v = parent[static_cast<std::size_t>(v)]) {
      in[static_cast<std::size_t>(v)] = 1;
      chosen.push_back(v);
    }
  }
  std::sort(chosen.begin(), chosen.end(), [&](int a, int b) {
    return bridge_key(g, ids, {a}).better_than(bridge_key(g, ids, {b}));
  });
  for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
    in[static_cast<std::size_t>(*it)] = 0;
    if (!connects(g, in, terminals.front())) in[static_cast<std::size_t>(*it)] = 1;
  }
  out.clear();
  for (int v : chosen) {
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return false;
}

}  // namespace detail

inline bool has_wet_rooms(const RoomGraph& graph) {
  return std::any_of(graph.nodes.begin(), graph.nodes.end(), [](const RoomNode& n) { return is_wet_category(n.label); });
}

/// Induced subgraph over every dk, wash, bath and wc node plus a minimum
/// set of bridging rooms. Wet rooms in different components of the plan
/// graph are bridged per component and returned as a flagged union.
inline WetArea wet_subgraph(const RoomGraph& graph) {
  if (!has_wet_rooms(graph)) throw Error(ErrorCode::kNoWetRooms, "plan " + graph.id + " has no wet rooms");
  const auto g = to_labeled(graph);
  std::vector<int> ids;
  for (const auto& n : graph.nodes) ids.push_back(n.id);
  const int n = g.vertex_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int comps = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = comps;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : g.adj[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = comps;
          stack.push_back(w);
        }
      }
    }
    ++comps;
  }
  WetArea out;
  std::set<int> keep;
  int wet_components = 0;
  for (int c = 0; c < comps; ++c) {
    std::vector<int> terminals;
    std::vector<int> candidates;
    for (int v = 0; v < n; ++v) {
      if (comp[static_cast<std::size_t>(v)] != c) continue;
      (is_wet_category(static_cast<Category>(g.labels[static_cast<std::size_t>(v)])) ? terminals : candidates).push_back(v);
    }
    if (terminals.empty()) continue;
    ++wet_components;
    std::vector<int> bridges;
    if (!detail::steiner_bridges(g, ids, terminals, candidates, bridges)) out.approximate = true;
    for (int v : terminals) keep.insert(ids[static_cast<std::size_t>(v)]);
    for (int v : bridges) {
      keep.insert(ids[static_cast<std::size_t>(v)]);
      out.bridges.push_back(ids[static_cast<std::size_t>(v)]);
    }
  }
  out.disconnected = wet_components > 1;
  std::sort(out.bridges.begin(), out.bridges.end());
  std::vector<RoomNode> nodes;
  for (const auto& node : graph.nodes) {
    if (keep.count(node.id)) nodes.push_back(node);
  }
  std::vector<RoomEdge> edges;
  for (const auto& e : graph.edges) {
    if (keep.count(e.a) && keep.count(e.b)) edges.push_back(e);
  }
  out.graph = make_room_graph(graph.id, std::move(nodes), std::move(edges));
  return out;
}

/// Canonical text of a possibly disconnected graph: the minimum DFS code of
/// each component (an isolated room prints as `[label]`), sorted and joined
/// with ` + `.
inline std::string component_code(const LabeledGraph& g) {
  const int n = g.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::string> parts;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> members;
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (int w : g.adj[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    if (members.size() == 1) {
      parts.push_back("[" + std::string(abbrev(static_cast<Category>(g.labels[static_cast<std::size_t>(s)]))) + "]");
    } else {
      parts.push_back(canonical_string(induced_subgraph(g, members)));
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

inline std::string wet_code(const RoomGraph& graph) { return component_code(to_labeled(wet_subgraph(graph).graph)); }

struct WetAreaType {
  std::string code;
  int frequency = 0;
};

using WetVocabulary = std::vector<WetAreaType>;

/// Wet-area codes seen at least twice, by frequency then code.
inline WetVocabulary build_wet_vocab(const std::vector<RoomGraph>& corpus) {
  std::map<std::string, int> freq;
  for (const auto& g : corpus) {
    if (has_wet_rooms(g)) ++freq[wet_code(g)];
  }
  if (freq.empty()) throw Error(ErrorCode::kNoWetRooms, "no plan in the corpus has wet rooms");
  WetVocabulary vocab;
  for (const auto& [code, f] : freq) {
    if (f > 1) vocab.push_back({code, f});
  }
  std::sort(vocab.begin(), vocab.end(), [](const WetAreaType& a, const WetAreaType& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.code < b.code;
  });
  return vocab;
}

inline std::vector<std::uint8_t> encode_wet(const std::string& code, const WetVocabulary& vocab) {
  if (vocab.empty()) throw Error(ErrorCode::kInvalidQuery, "empty wet-area vocabulary");
  std::vector<std::uint8_t> out(vocab.size(), 0);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab[i].code == code) {
      out[i] = 1;
      break;
    }
  }
  return out;
}

inline std::vector<std::uint8_t> encode_wet(const RoomGraph& graph, const WetVocabulary& vocab) {
  return encode_wet(has_wet_rooms(graph) ? wet_code(graph) : std::string(), vocab);
}

/// One code per line; a tab-separated frequency follows when known.
inline std::string write_wet_vocab(const WetVocabulary& vocab) {
  std::string out;
  for (const auto& t : vocab) out += t.code + "\t" + std::to_string(t.frequency) + "\n";
  return out;
}

inline WetVocabulary read_wet_vocab(std::string_view text) {
  WetVocabulary vocab;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    WetAreaType t;
    const auto tab = line.find('\t');
    t.code = line.substr(0, tab);
    if (tab != std::string::npos) {
      try {
        t.frequency = std::stoi(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kMalformedEntry, "wet vocabulary line: " + line);
      }
    }
    if (!seen.insert(t.code).second) throw Error(ErrorCode::kInvalidCode, "duplicate wet code " + t.code);
    vocab.push_back(std::move(t));
  }
  return vocab;
}

}  // namespace planscore
