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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "planscore/category.hpp"
#include "planscore/error.hpp"

namespace planscore {

using Json = nlohmann::json;

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, std::string(what) + ": " + e.what());
  }
}

/// A floor plan as a row-major grid of element categories.
struct SegmentedRaster {
  std::string id;
  int width = 0;
  int height = 0;
  double cell_size_m2 = 1.0;
  std::vector<std::uint8_t> grid;
  int bedrooms = 0;

  Category at(int row, int col) const {
    return static_cast<Category>(grid[static_cast<std::size_t>(row) * width + col]);
  }
  void set(int row, int col, Category c) {
    grid[static_cast<std::size_t>(row) * width + col] = static_cast<std::uint8_t>(c);
  }
  std::size_t cell_count() const { return grid.size(); }

  friend bool operator==(const SegmentedRaster&, const SegmentedRaster&) = default;
};

inline void validate_raster(const SegmentedRaster& r) {
  if (r.width <= 0 || r.height <= 0) {
    throw Error(ErrorCode::kDimensionMismatch, "raster " + r.id + ": non-positive dimensions");
  }
  if (r.grid.size() != static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "raster " + r.id + ": grid length " + std::to_string(r.grid.size()) +
                    " != " + std::to_string(r.width) + "*" + std::to_string(r.height));
  }
  if (!(r.cell_size_m2 > 0.0)) {
    throw Error(ErrorCode::kNonPositiveCellSize, "raster " + r.id);
  }
  for (auto code : r.grid) {
    if (!valid_category_code(code)) {
      throw Error(ErrorCode::kUnknownCategoryCode,
                  "raster " + r.id + ": code " + std::to_string(code));
    }
  }
  if (r.bedrooms < 0) throw Error(ErrorCode::kMalformedJson, "raster " + r.id + ": bedrooms < 0");
}

inline SegmentedRaster raster_from_json(const Json& j) {
  SegmentedRaster r;
  try {
    r.id = j.at("id").get<std::string>();
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    r.cell_size_m2 = j.at("cell_size_m2").get<double>();
    r.bedrooms = j.at("bedrooms").get<int>();
    const auto& grid = j.at("grid");
    if (!grid.is_array()) throw Error(ErrorCode::kMalformedJson, "grid is not an array");
    r.grid.reserve(grid.size());
    for (const auto& v : grid) {
      if (!v.is_number_integer()) throw Error(ErrorCode::kMalformedJson, "grid entry not an integer");
      const auto code = v.get<std::int64_t>();
      if (code < 0 || code >= kCategoryCount) {
        throw Error(ErrorCode::kUnknownCategoryCode, "code " + std::to_string(code));
      }
      r.grid.push_back(static_cast<std::uint8_t>(code));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("raster: ") + e.what());
  }
  validate_raster(r);
  return r;
}

inline SegmentedRaster parse_raster(std::string_view text) {
  return raster_from_json(parse_json(text, "raster"));
}

inline Json raster_to_json(const SegmentedRaster& r) {
  Json grid = Json::array();
  for (auto c : r.grid) grid.push_back(static_cast<int>(c));
  return Json{{"id", r.id},
              {"width", r.width},
              {"height", r.height},
              {"cell_size_m2", r.cell_size_m2},
              {"grid", std::move(grid)},
              {"bedrooms", r.bedrooms}};
}

/// Canonical form: keys sorted, no whitespace.
inline std::string serialize_raster(const SegmentedRaster& r) { return raster_to_json(r).dump(); }

/// 4-connected same-category labeling. `labels[cell]` is the component index;
/// components are numbered in scanline order of their first cell.
struct ComponentLabeling {
  std::vector<int> labels;
  std::vector<Category> category;
  std::vector<int> size;
};

inline ComponentLabeling label_components(const SegmentedRaster& r) {
  ComponentLabeling out;
  out.labels.assign(r.grid.size(), -1);
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(r.grid.size()); ++start) {
    if (out.labels[start] >= 0) continue;
    const int id = static_cast<int>(out.category.size());
    const auto cat = r.grid[start];
    out.category.push_back(static_cast<Category>(cat));
    out.size.push_back(0);
    out.labels[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      ++out.size[id];
      const int row = cell / r.width;
      const int col = cell % r.width;
      const std::array<std::pair<int, int>, 4> nbrs = {
          {{row - 1, col}, {row + 1, col}, {row, col - 1}, {row, col + 1}}};
      for (auto [nr, nc] : nbrs) {
        if (nr < 0 || nc < 0 || nr >= r.height || nc >= r.width) continue;
        const int n = nr * r.width + nc;
        if (out.labels[n] < 0 && r.grid[n] == cat) {
          out.labels[n] = id;
          stack.push_back(n);
        }
      }
    }
  }
  return out;
}

struct CategoryStat {
  double area_m2 = 0.0;
  int components = 0;
};

using CategoryStats = std::array<CategoryStat, kCategoryCount>;

inline CategoryStats category_stats(const SegmentedRaster& r) {
  CategoryStats stats{};
  std::array<std::int64_t, kCategoryCount> cells{};
  for (auto c : r.grid) ++cells[c];
  for (int i = 0; i < kCategoryCount; ++i) {
    stats[i].area_m2 = static_cast<double>(cells[i]) * r.cell_size_m2;
  }
  const auto labeling = label_components(r);
  for (auto c : labeling.category) ++stats[category_code(c)].components;
  return stats;
}

}  // namespace planscore
