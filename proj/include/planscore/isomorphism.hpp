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
#include <vector>

#include "planscore/category.hpp"
#include "planscore/graph.hpp"

namespace planscore {

namespace detail {

class SubgraphMatcher {
 public:
  SubgraphMatcher(const LabeledGraph& pattern, const LabeledGraph& host)
      : pattern_(pattern), host_(host) {}

  bool run() {
    const int pn = pattern_.vertex_count();
    if (pn == 0) return true;
    if (pn > host_.vertex_count() || pattern_.edge_count() > host_.edge_count()) return false;
    std::array<int, kCategoryCount> need{};
    std::array<int, kCategoryCount> have{};
    for (int l : pattern_.labels) ++need[l];
    for (int l : host_.labels) ++have[l];
    for (int l = 0; l < kCategoryCount; ++l) {
      if (need[l] > have[l]) return false;
    }
    plan_order(have);
    map_.assign(pn, -1);
    used_.assign(host_.vertex_count(), false);
    return extend(0);
  }

 private:
  // Visit order: rarest label first, then always the vertex with the most
  // already-ordered neighbours so candidates come from adjacency lists.
  void plan_order(const std::array<int, kCategoryCount>& have) {
    const int pn = pattern_.vertex_count();
    std::vector<bool> placed(pn, false);
    std::vector<int> links(pn, 0);
    order_.clear();
    anchor_.clear();
    for (int step = 0; step < pn; ++step) {
      int best = -1;
      for (int v = 0; v < pn; ++v) {
        if (placed[v]) continue;
        if (best < 0 || links[v] > links[best] ||
            (links[v] == links[best] && have[pattern_.labels[v]] < have[pattern_.labels[best]])) {
          best = v;
        }
      }
      int anchor = -1;
      for (int w : pattern_.adj[best]) {
        if (placed[w]) {
          anchor = w;
          break;
        }
      }
      placed[best] = true;
      order_.push_back(best);
      anchor_.push_back(anchor);
      for (int w : pattern_.adj[best]) ++links[w];
    }
  }

  bool feasible(int pv, int hv) const {
    if (used_[hv] || host_.labels[hv] != pattern_.labels[pv]) return false;
    if (host_.adj[hv].size() < pattern_.adj[pv].size()) return false;
    for (int pw : pattern_.adj[pv]) {
      const int hw = map_[pw];
      if (hw >= 0 && !host_.has_edge(hv, hw)) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int pv = order_[depth];
    const int anchor = anchor_[depth];
    auto attempt = [&](int hv) {
      if (!feasible(pv, hv)) return false;
      map_[pv] = hv;
      used_[hv] = true;
      if (extend(depth + 1)) return true;
      map_[pv] = -1;
      used_[hv] = false;
      return false;
    };
    if (anchor >= 0) {
      for (int hv : host_.adj[map_[anchor]]) {
        if (attempt(hv)) return true;
      }
    } else {
      for (int hv = 0; hv < host_.vertex_count(); ++hv) {
        if (attempt(hv)) return true;
      }
    }
    return false;
  }

  const LabeledGraph& pattern_;
  const LabeledGraph& host_;
  std::vector<int> order_;
  std::vector<int> anchor_;
  std::vector<int> map_;
  std::vector<bool> used_;
};

}  // namespace detail

/// Non-induced, label-preserving subgraph monomorphism test. Edge kinds are
/// not compared.
inline bool subgraph_isomorphic(const LabeledGraph& pattern, const LabeledGraph& host) {
  return detail::SubgraphMatcher(pattern, host).run();
}

inline bool subgraph_isomorphic(const RoomGraph& pattern, const RoomGraph& host) {
  return subgraph_isomorphic(to_labeled(pattern), to_labeled(host));
}

}  // namespace planscore
