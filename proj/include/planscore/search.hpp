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
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "planscore/error.hpp"
#include "planscore/io.hpp"
#include "planscore/raster.hpp"
#include "planscore/scores.hpp"

namespace planscore {

struct CatalogEntry {
  std::string plan_id;
  int bedrooms = 0;
  double total_area_m2 = 0.0;
  ScoreVector scores;  // predicted; finite but not clamped
  std::string raster;  // path, relative to the catalog file unless absolute

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

inline Json catalog_entry_to_json(const CatalogEntry& e) {
  return {{"plan_id", e.plan_id},
          {"bedrooms", e.bedrooms},
          {"total_area_m2", e.total_area_m2},
          {"scores", score_vector_to_json(e.scores)},
          {"raster", e.raster}};
}

inline CatalogEntry catalog_entry_from_json(const Json& j) {
  CatalogEntry e;
  e.plan_id = j.at("plan_id").get<std::string>();
  e.bedrooms = j.at("bedrooms").get<int>();
  e.total_area_m2 = j.at("total_area_m2").get<double>();
  e.raster = j.value("raster", "");
  const auto& s = j.at("scores");
  for (int i = 0; i < kScoreItemCount; ++i) e.scores[i] = s.at(std::string(kScoreItemNames[i])).get<double>();
  if (e.plan_id.empty()) throw Error(ErrorCode::kMalformedEntry, "empty plan_id");
  if (e.bedrooms < 0) throw Error(ErrorCode::kMalformedEntry, "negative bedrooms");
  if (!(e.total_area_m2 > 0.0) || !std::isfinite(e.total_area_m2)) {
    throw Error(ErrorCode::kMalformedEntry, "area must be > 0");
  }
  for (double v : e.scores.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kMalformedEntry, "non-finite score");
  }
  return e;
}

/// An immutable, validated catalog.
struct Catalog {
  std::vector<CatalogEntry> entries;
  std::unordered_map<std::string, std::size_t> index;
  std::filesystem::path base_dir;

  std::size_t size() const { return entries.size(); }

  const CatalogEntry* find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? nullptr : &entries[it->second];
  }
};

inline Catalog make_catalog(std::vector<CatalogEntry> entries, std::filesystem::path base_dir = {}) {
  Catalog c;
  c.base_dir = std::move(base_dir);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!c.index.emplace(entries[i].plan_id, i).second) {
      throw Error(ErrorCode::kDuplicatePlanId, entries[i].plan_id);
    }
  }
  c.entries = std::move(entries);
  return c;
}

inline std::string write_catalog_jsonl(const std::vector<CatalogEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += catalog_entry_to_json(e).dump() + "\n";
  return out;
}

inline Catalog parse_catalog(std::string_view text, std::filesystem::path base_dir = {}) {
  std::vector<CatalogEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "catalog line " + std::to_string(number);
    try {
      entries.push_back(catalog_entry_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kMalformedEntry, where + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMalformedEntry) throw;
      throw Error(ErrorCode::kMalformedEntry, where + ": " + e.what());
    }
  }
  return make_catalog(std::move(entries), std::move(base_dir));
}

inline Catalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(read_file(path), path.parent_path());
}

inline SegmentedRaster load_entry_raster(const Catalog& c, const CatalogEntry& e) {
  if (e.raster.empty()) throw Error(ErrorCode::kIo, "no raster for " + e.plan_id);
  std::filesystem::path p(e.raster);
  if (p.is_relative()) p = c.base_dir / p;
  return parse_raster(read_file(p));
}

struct SearchQuery {
  std::optional<int> bedrooms;  // 4 means 4 or more
  std::optional<double> min_area;
  std::optional<double> max_area;
  std::array<int, kQuestionCount> weights{};
  int limit = 20;

  void validate() const {
    for (int w : weights) {
      if (w < 0 || w > 2) throw Error(ErrorCode::kInvalidWeight, "weights must be 0, 1 or 2");
    }
    if (min_area && max_area && *min_area > *max_area) {
      throw Error(ErrorCode::kInvalidAreaRange, "min_area > max_area");
    }
    if (limit < 1) throw Error(ErrorCode::kInvalidQuery, "limit must be >= 1");
    if (bedrooms && *bedrooms < 0) throw Error(ErrorCode::kInvalidQuery, "bedrooms must be >= 0");
  }

  bool admits(const CatalogEntry& e) const {
    if (bedrooms) {
      if (*bedrooms >= 4 ? e.bedrooms < 4 : e.bedrooms != *bedrooms) return false;
    }
    if (min_area && e.total_area_m2 < *min_area) return false;
    if (max_area && e.total_area_m2 > *max_area) return false;
    return true;
  }

  double composite(const ScoreVector& s) const {
    double c = 0.0;
    for (int q = 0; q < kQuestionCount; ++q) c += weights[static_cast<std::size_t>(q)] * s[q];
    return c;
  }
};

struct RankedEntry {
  CatalogEntry entry;
  double composite = 0.0;
};

/// Filter, weighted sum, sort by (composite desc, Total desc, id asc), cut.
/// With all weights 0 every composite is 0 and Total decides.
inline std::vector<RankedEntry> rank(const SearchQuery& query, const Catalog& catalog) {
  query.validate();
  std::vector<RankedEntry> out;
  for (const auto& e : catalog.entries) {
    if (query.admits(e)) out.push_back({e, query.composite(e.scores)});
  }
  auto before = [](const RankedEntry& a, const RankedEntry& b) {
    if (a.composite != b.composite) return a.composite > b.composite;
    if (a.entry.scores[kTotalIndex] != b.entry.scores[kTotalIndex]) {
      return a.entry.scores[kTotalIndex] > b.entry.scores[kTotalIndex];
    }
    return a.entry.plan_id < b.entry.plan_id;
  };
  const auto keep = std::min(out.size(), static_cast<std::size_t>(query.limit));
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), before);
  out.resize(keep);
  return out;
}

inline Json ranked_to_json(const std::vector<RankedEntry>& results) {
  Json arr = Json::array();
  for (const auto& r : results) {
    arr.push_back({{"plan_id", r.entry.plan_id},
                   {"composite", r.composite},
                   {"scores", score_vector_to_json(r.entry.scores)},
                   {"bedrooms", r.entry.bedrooms},
                   {"total_area_m2", r.entry.total_area_m2}});
  }
  return {{"results", arr}};
}

/// Holds the current catalog; readers take a snapshot pointer and keep it
/// for the whole request, swap replaces the pointer under a short lock.
class CatalogStore {
 public:
  explicit CatalogStore(Catalog initial = {}) : current_(std::make_shared<const Catalog>(std::move(initial))) {}

  std::shared_ptr<const Catalog> snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return current_;
  }

  void swap(Catalog next) {
    auto p = std::make_shared<const Catalog>(std::move(next));
    std::lock_guard<std::mutex> lock(mu_);
    current_ = std::move(p);
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Catalog> current_;
};

}  // namespace planscore
