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
#include <optional>
#include <string_view>

#include "planscore/error.hpp"

namespace planscore {

/// Floor-plan element categories. The numeric value is the raster code and
/// also the label order used inside DFS codes.
enum class Category : std::uint8_t {
  kWall = 0,
  kWbed,
  kJbed,
  kDk,
  kWc,
  kBath,
  kWash,
  kBalc,
  kEnt,
  kCorri,
  kStairs,
  kCl,
  kDoor,
  kWindow,
  kUnknown,
};

inline constexpr int kCategoryCount = 15;

inline constexpr std::array<std::string_view, kCategoryCount> kCategoryAbbrev = {
    "wall", "wbed", "jbed", "dk",     "wc", "bath",   "wash",    "balc",
    "ent",  "corri", "stairs", "cl", "door", "window", "unknown"};

inline constexpr int category_code(Category c) { return static_cast<int>(c); }

inline constexpr bool valid_category_code(int code) {
  return code >= 0 && code < kCategoryCount;
}

inline Category category_from_code(int code) {
  if (!valid_category_code(code)) {
    throw Error(ErrorCode::kUnknownCategoryCode, "category code " + std::to_string(code));
  }
  return static_cast<Category>(code);
}

inline constexpr std::string_view abbrev(Category c) {
  return kCategoryAbbrev[static_cast<std::size_t>(c)];
}

inline std::optional<Category> category_from_abbrev(std::string_view name) {
  for (int i = 0; i < kCategoryCount; ++i) {
    if (kCategoryAbbrev[static_cast<std::size_t>(i)] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

/// Rooms become graph nodes; walls, openings and unlabeled cells do not.
inline constexpr bool is_node_category(Category c) {
  return c != Category::kWall && c != Category::kDoor && c != Category::kWindow &&
         c != Category::kUnknown;
}

inline constexpr bool is_wet_category(Category c) {
  return c == Category::kDk || c == Category::kWash || c == Category::kBath ||
         c == Category::kWc;
}

}  // namespace planscore
