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
#include <map>
#include <utility>
#include <vector>

#include "planscore/graph.hpp"
#include "planscore/raster.hpp"

namespace planscore {

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Maximal 4-connected, uniformly labeled region of a raster.
struct Component {
  int id = 0;
  Category category = Category::kWall;
  std::vector<Cell> cells;  // scanline order
};

/// Partitions every cell into components; ids follow the scanline order of
/// each component's first cell.
inline std::vector<Component> extract_components(const SegmentedRaster& raster) {
  const auto labeling = label_components(raster);
  std::vector<Component> out(labeling.category.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].id = static_cast<int>(i);
    out[i].category = labeling.category[i];
    out[i].cells.reserve(labeling.size[i]);
  }
  for (int cell = 0; cell < static_cast<int>(raster.grid.size()); ++cell) {
    out[labeling.labels[cell]].cells.push_back({cell / raster.width, cell % raster.width});
  }
  return out;
}

struct ExtractOptions {
  int min_room_cells = 2;
};

/// Room graph of a raster. Nodes are room components with at least
/// `min_room_cells` cells, numbered 0.. in component order. Two rooms are
/// joined when they touch (open), share a door component (door) or share a
/// window component (window); door beats open beats window. A door or window
/// touching three or more rooms joins only the two with the longest shared
/// boundary, ties to the lower component id.
inline RoomGraph build_graph(const SegmentedRaster& raster, const ExtractOptions& options = {}) {
  const auto labeling = label_components(raster);
  const int components = static_cast<int>(labeling.category.size());
  std::vector<int> node_of(components, -1);
  std::vector<RoomNode> nodes;
  for (int c = 0; c < components; ++c) {
    if (is_node_category(labeling.category[c]) && labeling.size[c] >= options.min_room_cells) {
      node_of[c] = static_cast<int>(nodes.size());
      nodes.push_back({node_of[c], labeling.category[c]});
    }
  }

  // Shared boundary length (adjacent cell pairs) between components.
  std::map<std::pair<int, int>, int> contact;
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      const int a = labeling.labels[r * raster.width + c];
      const std::array<std::pair<int, int>, 2> nbrs = {{{r + 1, c}, {r, c + 1}}};
      for (auto [nr, nc] : nbrs) {
        if (nr >= raster.height || nc >= raster.width) continue;
        const int b = labeling.labels[nr * raster.width + nc];
        if (a == b) continue;
        ++contact[{std::min(a, b), std::max(a, b)}];
      }
    }
  }

  std::map<std::pair<int, int>, EdgeKind> edges;
  auto rank = [](EdgeKind k) {
    switch (k) {
      case EdgeKind::kDoor: return 2;
      case EdgeKind::kOpen: return 1;
      case EdgeKind::kWindow: return 0;
    }
    return 0;
  };
  auto offer = [&](int na, int nb, EdgeKind kind) {
    const auto key = std::pair(std::min(na, nb), std::max(na, nb));
    auto [it, inserted] = edges.emplace(key, kind);
    if (!inserted && rank(kind) > rank(it->second)) it->second = kind;
  };

  std::vector<std::vector<std::pair<int, int>>> touching(components);  // opening -> (room comp, boundary)
  for (const auto& [pair, length] : contact) {
    const auto [a, b] = pair;
    const auto ca = labeling.category[a];
    const auto cb = labeling.category[b];
    if (node_of[a] >= 0 && node_of[b] >= 0) offer(node_of[a], node_of[b], EdgeKind::kOpen);
    const bool a_opening = ca == Category::kDoor || ca == Category::kWindow;
    const bool b_opening = cb == Category::kDoor || cb == Category::kWindow;
    if (a_opening && node_of[b] >= 0) touching[a].push_back({b, length});
    if (b_opening && node_of[a] >= 0) touching[b].push_back({a, length});
  }
  for (int opening = 0; opening < components; ++opening) {
    auto rooms = touching[opening];
    if (rooms.size() < 2) continue;
    std::sort(rooms.begin(), rooms.end(), [](const auto& x, const auto& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    const auto kind = labeling.category[opening] == Category::kDoor ? EdgeKind::kDoor : EdgeKind::kWindow;
    offer(node_of[rooms[0].first], node_of[rooms[1].first], kind);
  }

  std::vector<RoomEdge> out;
  for (const auto& [key, kind] : edges) out.push_back({key.first, key.second, kind});
  return make_room_graph(raster.id, std::move(nodes), std::move(out));
}

}  // namespace planscore
