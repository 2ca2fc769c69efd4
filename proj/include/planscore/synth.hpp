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
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "planscore/extract.hpp"
#include "planscore/isomorphism.hpp"
#include "planscore/raster.hpp"
#include "planscore/scores.hpp"

namespace planscore {

/// Stable 64-bit FNV-1a, used to derive per-item seeds.
inline std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Knobs of the procedural floor-plan generator. Plans are laid out as a
/// row of north rooms (optionally fronted by a balcony), a corridor with the
/// entrance at its west end, and a row of south rooms.
struct GeneratorSpec {
  double cell_size_m2 = 0.81;
  int north_height_min = 4;
  int north_height_max = 5;
  int south_height_min = 3;
  int south_height_max = 4;
  int corridor_height = 2;
  int balcony_depth = 2;
  int min_room_cells = 6;
  int max_width = 64;
  int max_height = 24;
  double balcony_prob = 0.7;
  /// Balcony spanning a western bedroom and the dining kitchen it opens onto.
  double wide_span_prob = 0.35;
  /// Bathroom opening directly onto the dining kitchen.
  double dk_bath_prob = 0.25;
  double jbed_prob = 0.2;
  double stairs_prob = 0.05;
  int max_closets = 2;
};

namespace detail {

enum class Separator { kWall, kDoor, kOpen };

struct DraftRoom {
  Category category = Category::kWbed;
  int width = 3;
  bool corridor_door = true;
  bool open_to_corridor = false;
  bool balcony = false;
  bool balcony_door = false;
};

struct DraftBand {
  std::vector<DraftRoom> rooms;
  std::vector<Separator> separators;  // between rooms[i] and rooms[i+1]
  int height = 4;

  void push(DraftRoom room, Separator before = Separator::kWall) {
    if (!rooms.empty()) separators.push_back(before);
    rooms.push_back(room);
  }
  int width() const {
    int w = 0;
    for (const auto& r : rooms) w += r.width;
    for (auto s : separators) w += s == Separator::kOpen ? 0 : 1;
    return w;
  }
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline int room_width(std::mt19937_64& rng, Category c) {
  switch (c) {
    case Category::kDk: return uniform(rng, 5, 7);
    case Category::kWbed: return uniform(rng, 3, 5);
    case Category::kJbed: return uniform(rng, 3, 4);
    case Category::kWc: return 2;
    case Category::kWash: return uniform(rng, 2, 3);
    case Category::kBath: return uniform(rng, 2, 3);
    case Category::kCl: return 2;
    case Category::kStairs: return 2;
    default: return 3;
  }
}

inline void draw_band(SegmentedRaster& r, const DraftBand& band, int top, int door_row, int window_row) {
  int x = 1;
  for (std::size_t i = 0; i < band.rooms.size(); ++i) {
    const auto& room = band.rooms[i];
    for (int row = top; row < top + band.height; ++row) {
      for (int col = x; col < x + room.width; ++col) r.set(row, col, room.category);
    }
    const int mid = x + room.width / 2;
    if (room.open_to_corridor) {
      for (int col = x + 1; col < x + room.width - 1; ++col) r.set(door_row, col, room.category);
    } else if (room.corridor_door) {
      r.set(door_row, mid, Category::kDoor);
    }
    if (room.balcony && window_row >= 0) r.set(window_row, mid, room.balcony_door ? Category::kDoor : Category::kWindow);
    x += room.width;
    if (i < band.separators.size()) {
      const auto sep = band.separators[i];
      if (sep != Separator::kOpen) {
        if (sep == Separator::kDoor) r.set(top + band.height / 2, x, Category::kDoor);
        ++x;
      }
    }
  }
}

}  // namespace detail

/// Generates plan `index` of a corpus with the given bedroom count.
inline SegmentedRaster generate_plan(const GeneratorSpec& spec, std::uint64_t seed, int index, int bedrooms,
                                     std::string id) {
  using detail::DraftRoom;
  using detail::Separator;
  auto rng = derived_rng(seed, static_cast<std::uint64_t>(index));

  std::vector<Category> beds;
  for (int i = 0; i < bedrooms; ++i) beds.push_back(detail::coin(rng, spec.jbed_prob) ? Category::kJbed : Category::kWbed);
  const bool has_balcony = detail::coin(rng, spec.balcony_prob);
  const bool has_wbed = std::find(beds.begin(), beds.end(), Category::kWbed) != beds.end();
  const bool wide_span = has_balcony && has_wbed && detail::coin(rng, spec.wide_span_prob);
  const bool dk_bath = detail::coin(rng, spec.dk_bath_prob);

  const int north_beds = std::max(1, (bedrooms + 1) / 2);
  std::vector<Category> north_list(beds.begin(), beds.begin() + std::min<int>(north_beds, bedrooms));
  std::vector<Category> south_list(beds.begin() + static_cast<long>(north_list.size()), beds.end());
  if (wide_span && std::find(north_list.begin(), north_list.end(), Category::kWbed) == north_list.end()) {
    // Swap a western bedroom into the north row.
    auto it = std::find(south_list.begin(), south_list.end(), Category::kWbed);
    std::swap(north_list.front(), *it);
  }

  detail::DraftBand north;
  north.height = detail::uniform(rng, spec.north_height_min, spec.north_height_max);
  std::vector<Category> left;
  std::vector<Category> right;
  if (wide_span) {
    const auto it = std::find(north_list.begin(), north_list.end(), Category::kWbed);
    north_list.erase(it);
    left.push_back(Category::kWbed);
    right = north_list;
  } else {
    const int split = detail::uniform(rng, 0, static_cast<int>(north_list.size()));
    left.assign(north_list.begin(), north_list.begin() + split);
    right.assign(north_list.begin() + split, north_list.end());
  }
  for (auto c : left) north.push({c, detail::room_width(rng, c)});
  const int dk_index = static_cast<int>(north.rooms.size());
  auto bed_dk_separator = [&](Category bed) {
    if (bed == Category::kJbed) {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      return u < 0.5 ? Separator::kOpen : (u < 0.8 ? Separator::kDoor : Separator::kWall);
    }
    return detail::coin(rng, 0.3) ? Separator::kDoor : Separator::kWall;
  };
  DraftRoom dk{Category::kDk, detail::room_width(rng, Category::kDk)};
  if (detail::coin(rng, 0.5)) {
    dk.corridor_door = false;
    dk.open_to_corridor = true;
  }
  Separator before_dk = Separator::kWall;
  if (!left.empty()) before_dk = wide_span ? Separator::kDoor : bed_dk_separator(left.back());
  north.push(dk, before_dk);
  if (dk_bath) {
    DraftRoom bath{Category::kBath, detail::room_width(rng, Category::kBath)};
    bath.corridor_door = false;
    north.push(bath, Separator::kDoor);
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    const auto c = right[i];
    const Separator sep = (i == 0 && !dk_bath) ? bed_dk_separator(c) : Separator::kWall;
    north.push({c, detail::room_width(rng, c)}, sep);
  }

  // Balcony coverage: a contiguous run of north rooms.
  if (has_balcony) {
    auto linked_wbed_dk = [&](int a, int b) {
      if (a > b) std::swap(a, b);
      const auto ca = north.rooms[a].category;
      const auto cb = north.rooms[b].category;
      const bool pair = (ca == Category::kWbed && cb == Category::kDk) || (ca == Category::kDk && cb == Category::kWbed);
      return pair && north.separators[a] != Separator::kWall;
    };
    std::vector<int> covered;
    if (wide_span) {
      covered = {dk_index - 1, dk_index};
    } else {
      std::vector<int> candidates;
      for (int i = 0; i < static_cast<int>(north.rooms.size()); ++i) {
        if (north.rooms[i].category != Category::kBath) candidates.push_back(i);
      }
      const int anchor = candidates[detail::uniform(rng, 0, static_cast<int>(candidates.size()) - 1)];
      covered = {anchor};
      if (detail::coin(rng, 0.5)) {
        for (int next : {anchor + 1, anchor - 1}) {
          if (next < 0 || next >= static_cast<int>(north.rooms.size())) continue;
          if (north.rooms[next].category == Category::kBath || linked_wbed_dk(anchor, next)) continue;
          covered.push_back(next);
          break;
        }
      }
    }
    for (int i : covered) {
      north.rooms[i].balcony = true;
      north.rooms[i].balcony_door = detail::coin(rng, 0.25);
    }
  }

  // South row: remaining bedrooms (with closets), the wet group, extras.
  detail::DraftBand south;
  south.height = detail::uniform(rng, spec.south_height_min, spec.south_height_max);
  std::vector<std::vector<std::pair<DraftRoom, Separator>>> groups;
  const int closets = detail::uniform(rng, 0, spec.max_closets);
  std::vector<int> closet_owner(closets, -1);
  for (auto& owner : closet_owner) {
    if (!south_list.empty() && detail::coin(rng, 0.7)) owner = detail::uniform(rng, 0, static_cast<int>(south_list.size()) - 1);
  }
  for (int b = 0; b < static_cast<int>(south_list.size()); ++b) {
    std::vector<std::pair<DraftRoom, Separator>> group;
    group.push_back({{south_list[b], detail::room_width(rng, south_list[b])}, Separator::kWall});
    if (std::count(closet_owner.begin(), closet_owner.end(), b) > 0) {
      DraftRoom cl{Category::kCl, detail::room_width(rng, Category::kCl)};
      cl.corridor_door = false;
      group.push_back({cl, Separator::kDoor});
    }
    groups.push_back(std::move(group));
  }
  for (int owner : closet_owner) {
    if (owner < 0) groups.push_back({{{Category::kCl, detail::room_width(rng, Category::kCl)}, Separator::kWall}});
  }
  {
    std::vector<std::pair<DraftRoom, Separator>> wet;
    auto room = [&](Category c, bool door) {
      DraftRoom r{c, detail::room_width(rng, c)};
      r.corridor_door = door;
      return r;
    };
    if (dk_bath) {
      wet.push_back({room(Category::kWash, true), Separator::kWall});
      if (detail::coin(rng, 0.4)) {
        wet.push_back({room(Category::kWc, false), Separator::kDoor});
      } else {
        wet.push_back({room(Category::kWc, true), Separator::kWall});
      }
    } else {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      if (u < 0.35) {
        wet.push_back({room(Category::kWc, false), Separator::kWall});
        wet.push_back({room(Category::kWash, true), Separator::kDoor});
        wet.push_back({room(Category::kBath, false), Separator::kDoor});
      } else if (u < 0.75) {
        wet.push_back({room(Category::kWc, true), Separator::kWall});
        wet.push_back({room(Category::kWash, true), Separator::kWall});
        wet.push_back({room(Category::kBath, false), Separator::kDoor});
      } else {
        wet.push_back({room(Category::kWash, true), Separator::kWall});
        wet.push_back({room(Category::kBath, true), Separator::kWall});
        wet.push_back({room(Category::kWc, true), Separator::kWall});
      }
    }
    groups.push_back(std::move(wet));
  }
  if (detail::coin(rng, spec.stairs_prob)) {
    groups.push_back({{{Category::kStairs, detail::room_width(rng, Category::kStairs)}, Separator::kWall}});
  }
  std::shuffle(groups.begin(), groups.end(), rng);
  for (const auto& group : groups) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      south.push(group[i].first, i == 0 ? Separator::kWall : group[i].second);
    }
  }

  // Minimum room size, then equal band widths.
  for (auto* band : {&north, &south}) {
    const int min_width = (spec.min_room_cells + band->height - 1) / band->height;
    for (auto& room : band->rooms) room.width = std::max(room.width, min_width);
  }
  // Spread the slack over the rooms, widest first.
  auto widen = [](detail::DraftBand& band, int extra) {
    std::vector<std::size_t> order(band.rooms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return band.rooms[a].width > band.rooms[b].width; });
    for (int k = 0; k < extra; ++k) ++band.rooms[order[static_cast<std::size_t>(k) % order.size()]].width;
  };
  const int nw = north.width();
  const int sw = south.width();
  if (nw < sw) widen(north, sw - nw);
  if (sw < nw) widen(south, nw - sw);

  const int top = has_balcony ? spec.balcony_depth : 0;
  SegmentedRaster r;
  r.id = std::move(id);
  r.cell_size_m2 = spec.cell_size_m2;
  r.bedrooms = bedrooms;
  r.width = north.width() + 2;
  r.height = top + 1 + north.height + 1 + spec.corridor_height + 1 + south.height + 1;
  if (r.width > spec.max_width || r.height > spec.max_height) {
    throw Error(ErrorCode::kInfeasibleSpec, "plan " + r.id + " needs " + std::to_string(r.width) + "x" +
                                                std::to_string(r.height) + " cells, bounds are " +
                                                std::to_string(spec.max_width) + "x" + std::to_string(spec.max_height));
  }
  r.grid.assign(static_cast<std::size_t>(r.width) * r.height, static_cast<std::uint8_t>(Category::kWall));

  const int window_row = has_balcony ? top : -1;
  const int north_top = top + 1;
  const int north_door_row = north_top + north.height;
  const int corridor_top = north_door_row + 1;
  const int south_door_row = corridor_top + spec.corridor_height;
  const int south_top = south_door_row + 1;

  if (has_balcony) {
    int x = 1;
    int first = -1;
    int last = -1;
    for (std::size_t i = 0; i < north.rooms.size(); ++i) {
      if (north.rooms[i].balcony) {
        if (first < 0) first = x;
        last = x + north.rooms[i].width - 1;
      }
      x += north.rooms[i].width;
      if (i < north.separators.size() && north.separators[i] != Separator::kOpen) ++x;
    }
    for (int row = 0; row < top; ++row) {
      for (int col = 0; col < r.width; ++col) {
        r.set(row, col, (col >= first && col <= last) ? Category::kBalc : Category::kUnknown);
      }
    }
  }
  for (int row = corridor_top; row < corridor_top + spec.corridor_height; ++row) {
    for (int col = 1; col < r.width - 1; ++col) r.set(row, col, col <= 2 ? Category::kEnt : Category::kCorri);
  }
  detail::draw_band(r, north, north_top, north_door_row, window_row);
  detail::draw_band(r, south, south_top, south_door_row, -1);
  validate_raster(r);
  return r;
}

/// Deterministic corpus with bedroom counts balanced over 1, 2, 3 and 4+.
inline std::vector<SegmentedRaster> generate_corpus(int count, std::uint64_t seed, const GeneratorSpec& spec = {}) {
  if (count < 1) throw Error(ErrorCode::kInfeasibleSpec, "count must be >= 1");
  std::vector<int> buckets(count);
  for (int i = 0; i < count; ++i) buckets[i] = i % 4;
  auto rng = derived_rng(seed, 0xb0cce75ull);
  std::shuffle(buckets.begin(), buckets.end(), rng);
  const int digits = std::max(4, static_cast<int>(std::to_string(count - 1).size()));
  std::vector<SegmentedRaster> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    int bedrooms = buckets[i] + 1;
    if (bedrooms == 4 && detail::coin(rng, 0.25)) bedrooms = 5;
    std::string id = std::to_string(i);
    id = "p" + std::string(static_cast<std::size_t>(digits) - id.size(), '0') + id;
    out.push_back(generate_plan(spec, seed, i, bedrooms, std::move(id)));
  }
  return out;
}

/// Structural markers the hidden score model can reward or penalize.
struct PlantedPatterns {
  LabeledGraph wide_span;   // (wbed)-(dk)-(balc) triangle
  LabeledGraph dk_bath;     // (dk)-(bath)
  LabeledGraph wet_chain;   // (wc)-(wash)-(bath)

  static PlantedPatterns standard() {
    PlantedPatterns p;
    auto build = [](std::vector<Category> labels, std::vector<std::pair<int, int>> edges) {
      LabeledGraph g;
      for (auto c : labels) g.add_vertex(category_code(c));
      for (auto [u, v] : edges) g.add_edge(u, v);
      return g;
    };
    p.wide_span = build({Category::kWbed, Category::kDk, Category::kBalc}, {{0, 1}, {1, 2}, {2, 0}});
    p.dk_bath = build({Category::kDk, Category::kBath}, {{0, 1}});
    p.wet_chain = build({Category::kWc, Category::kWash, Category::kBath}, {{0, 1}, {1, 2}});
    return p;
  }
};

inline constexpr int kHiddenFeatureCount = 2 * kCategoryCount + 3;

/// Ground-truth scoring of a plan: per question a linear function of
/// interpretable statistics (area/20 and count/2 per category, plus the
/// presence of the three planted patterns), centered and scaled on a
/// calibration corpus.
struct HiddenScoreModel {
  std::array<std::array<double, kHiddenFeatureCount>, kQuestionCount> weights{};
  std::array<double, kQuestionCount> center{};
  std::array<double, kQuestionCount> spread{1, 1, 1, 1, 1, 1, 1, 1, 1};
  double truth_scale = 0.5;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  static constexpr int kWideSpan = 2 * kCategoryCount;
  static constexpr int kDkBath = kWideSpan + 1;
  static constexpr int kWetChain = kWideSpan + 2;

  /// Random room-statistic weights plus planted effects: the wide-span
  /// triangle lifts Q2, the dk-bath edge lowers Q4 and Q9, the wet chain
  /// lowers Q5.
  static HiddenScoreModel make(std::uint64_t seed, double planted_strength = 1.5, double noise_sd = 0.0) {
    HiddenScoreModel m;
    m.seed = seed;
    m.noise_sd = noise_sd;
    auto rng = derived_rng(seed, 0x5c0e5ull);
    std::normal_distribution<double> normal(0.0, 0.3);
    for (auto& w : m.weights) {
      for (int c = 0; c < kCategoryCount; ++c) {
        if (!is_node_category(static_cast<Category>(c))) continue;
        w[2 * c] = normal(rng);
        w[2 * c + 1] = normal(rng);
      }
    }
    m.weights[1][kWideSpan] += planted_strength;
    m.weights[3][kDkBath] -= planted_strength;
    m.weights[8][kDkBath] -= 0.6 * planted_strength;
    m.weights[4][kWetChain] -= 0.6 * planted_strength;
    return m;
  }

  static std::array<double, kHiddenFeatureCount> features(const SegmentedRaster& raster) {
    static const auto planted = PlantedPatterns::standard();
    std::array<double, kHiddenFeatureCount> f{};
    const auto stats = category_stats(raster);
    for (int c = 0; c < kCategoryCount; ++c) {
      f[2 * c] = stats[c].area_m2 / 20.0;
      f[2 * c + 1] = stats[c].components / 2.0;
    }
    const auto g = to_labeled(build_graph(raster));
    f[kWideSpan] = subgraph_isomorphic(planted.wide_span, g) ? 1.0 : 0.0;
    f[kDkBath] = subgraph_isomorphic(planted.dk_bath, g) ? 1.0 : 0.0;
    f[kWetChain] = subgraph_isomorphic(planted.wet_chain, g) ? 1.0 : 0.0;
    return f;
  }

  std::array<double, kQuestionCount> linear(const std::array<double, kHiddenFeatureCount>& f) const {
    std::array<double, kQuestionCount> out{};
    for (int q = 0; q < kQuestionCount; ++q) {
      for (int k = 0; k < kHiddenFeatureCount; ++k) out[q] += weights[q][k] * f[k];
    }
    return out;
  }

  /// Centers and scales each question on `corpus` (population moments).
  void calibrate(const std::vector<SegmentedRaster>& corpus) {
    std::array<double, kQuestionCount> sum{};
    std::array<double, kQuestionCount> sq{};
    for (const auto& r : corpus) {
      const auto v = linear(features(r));
      for (int q = 0; q < kQuestionCount; ++q) {
        sum[q] += v[q];
        sq[q] += v[q] * v[q];
      }
    }
    const double n = static_cast<double>(corpus.size());
    for (int q = 0; q < kQuestionCount; ++q) {
      center[q] = sum[q] / n;
      const double var = sq[q] / n - center[q] * center[q];
      spread[q] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
  }

  std::array<double, kQuestionCount> truth(const SegmentedRaster& raster) const {
    const auto v = linear(features(raster));
    std::array<double, kQuestionCount> out{};
    auto rng = derived_rng(seed, fnv1a(raster.id));
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int q = 0; q < kQuestionCount; ++q) {
      out[q] = truth_scale * (v[q] - center[q]) / spread[q];
      if (noise_sd > 0.0) out[q] += noise_sd * noise(rng);
    }
    return out;
  }
};

}  // namespace planscore
