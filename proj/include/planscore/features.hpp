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
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "planscore/emerging.hpp"
#include "planscore/error.hpp"
#include "planscore/hash.hpp"
#include "planscore/mcs.hpp"
#include "planscore/raster.hpp"
#include "planscore/wet_area.hpp"

namespace planscore {

inline constexpr int kMetaDims = 2 * kCategoryCount;

/// (area in m2, component count) for each of the 15 categories, in code order.
inline std::vector<double> metadata_vector(const SegmentedRaster& raster) {
  const auto stats = category_stats(raster);
  std::vector<double> out;
  out.reserve(kMetaDims);
  for (const auto& s : stats) {
    out.push_back(s.area_m2);
    out.push_back(static_cast<double>(s.components));
  }
  return out;
}

/// Per-column z-scoring fitted on training rows (population sd). Columns
/// that are constant in training map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<std::uint8_t> constant;

  std::size_t dims() const { return mean.size(); }

  static Standardizer fit(const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2) throw Error(ErrorCode::kTooFewRows, "standardizer needs >= 2 rows");
    const std::size_t d = rows.front().size();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.sd.assign(d, 1.0);
    s.constant.assign(d, 0);
    for (const auto& r : rows) {
      if (r.size() != d) throw Error(ErrorCode::kShapeMismatch, "ragged training rows");
      for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    const double n = static_cast<double>(rows.size());
    for (auto& m : s.mean) m /= n;
    std::vector<double> var(d, 0.0);
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < d; ++j) var[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
    }
    for (std::size_t j = 0; j < d; ++j) {
      var[j] /= n;
      if (var[j] <= 1e-24 * std::max(1.0, s.mean[j] * s.mean[j])) {
        s.constant[j] = 1;
      } else {
        s.sd[j] = std::sqrt(var[j]);
      }
    }
    return s;
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    if (x.size() != mean.size()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "vector of length " + std::to_string(x.size()) + " for a " + std::to_string(mean.size()) + "-dim fit");
    }
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = constant[j] ? 0.0 : (x[j] - mean[j]) / sd[j];
    return out;
  }

  Json to_json() const { return {{"mean", mean}, {"sd", sd}, {"constant", constant}}; }

  static Standardizer from_json(const Json& j) {
    Standardizer s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.sd = j.at("sd").get<std::vector<double>>();
    s.constant = j.at("constant").get<std::vector<std::uint8_t>>();
    if (s.sd.size() != s.mean.size() || s.constant.size() != s.mean.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "standardizer fields differ in length");
    }
    return s;
  }
};

/// Unstandardized per-plan features.
struct RawFeatures {
  std::string plan_id;
  std::vector<double> subgraph;  // emerging presence then wet one-hot
  std::vector<double> mcs;
  std::vector<double> meta;
};

struct FeatureBundle {
  std::string plan_id;
  std::vector<double> subgraph;
  std::vector<double> mcs;
  std::vector<double> meta;
};

/// Everything the feature transform depends on, fitted on training plans.
struct FeatureContext {
  EmergingVocabulary emerging;
  WetVocabulary wet;
  std::vector<std::string> reference_ids;
  std::vector<LabeledGraph> reference_graphs;
  McsOptions mcs;
};

inline std::string codes_hash(const std::vector<std::string>& codes) {
  std::string joined;
  for (const auto& c : codes) joined += c + "\n";
  return sha256_hex(joined);
}

inline std::vector<std::string> wet_codes(const WetVocabulary& v) {
  std::vector<std::string> out;
  for (const auto& t : v) out.push_back(t.code);
  return out;
}

inline RawFeatures raw_features(const std::string& plan_id, const LabeledGraph& graph, const SegmentedRaster& raster,
                                const FeatureContext& ctx) {
  RawFeatures r;
  r.plan_id = plan_id;
  if (!ctx.emerging.entries.empty()) {
    for (auto b : encode_presence(graph, ctx.emerging)) r.subgraph.push_back(b);
  }
  if (!ctx.wet.empty()) {
    for (auto b : encode_wet(from_labeled(graph, plan_id), ctx.wet)) r.subgraph.push_back(b);
  }
  r.mcs = similarity_vector(graph, ctx.reference_graphs, ctx.mcs);
  r.meta = metadata_vector(raster);
  return r;
}

/// The fitted transform: vocabulary hashes, reference ids and the three
/// block standardizers.
struct FeatureSchema {
  std::string emerging_hash;
  std::string wet_hash;
  std::size_t emerging_size = 0;
  std::size_t wet_size = 0;
  std::vector<std::string> reference_ids;
  Standardizer subgraph;
  Standardizer mcs;
  Standardizer meta;

  Json to_json() const {
    return {{"emerging_vocab_sha256", emerging_hash},
            {"wet_vocab_sha256", wet_hash},
            {"emerging_size", emerging_size},
            {"wet_size", wet_size},
            {"reference_ids", reference_ids},
            {"subgraph", subgraph.to_json()},
            {"mcs", mcs.to_json()},
            {"meta", meta.to_json()}};
  }

  static FeatureSchema from_json(const Json& j) {
    try {
      FeatureSchema s;
      s.emerging_hash = j.at("emerging_vocab_sha256").get<std::string>();
      s.wet_hash = j.at("wet_vocab_sha256").get<std::string>();
      s.emerging_size = j.at("emerging_size").get<std::size_t>();
      s.wet_size = j.at("wet_size").get<std::size_t>();
      s.reference_ids = j.at("reference_ids").get<std::vector<std::string>>();
      s.subgraph = Standardizer::from_json(j.at("subgraph"));
      s.mcs = Standardizer::from_json(j.at("mcs"));
      s.meta = Standardizer::from_json(j.at("meta"));
      return s;
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaMismatch, std::string("schema file: ") + e.what());
    }
  }

  std::string fingerprint() const { return sha256_hex(to_json().dump()); }

  std::array<std::size_t, 3> lengths() const { return {subgraph.dims(), mcs.dims(), meta.dims()}; }

  /// Throws SchemaMismatch unless `ctx` is the context this schema was fitted with.
  void check(const FeatureContext& ctx) const {
    if (codes_hash(ctx.emerging.codes()) != emerging_hash || codes_hash(wet_codes(ctx.wet)) != wet_hash ||
        ctx.reference_ids != reference_ids) {
      throw Error(ErrorCode::kSchemaMismatch, "vocabulary or reference set differs from the fitted schema");
    }
  }
};

inline FeatureSchema fit_schema(const FeatureContext& ctx, const std::vector<RawFeatures>& train) {
  FeatureSchema s;
  s.emerging_hash = codes_hash(ctx.emerging.codes());
  s.wet_hash = codes_hash(wet_codes(ctx.wet));
  s.emerging_size = ctx.emerging.size();
  s.wet_size = ctx.wet.size();
  s.reference_ids = ctx.reference_ids;
  std::vector<std::vector<double>> sub, mcs, meta;
  for (const auto& r : train) {
    sub.push_back(r.subgraph);
    mcs.push_back(r.mcs);
    meta.push_back(r.meta);
  }
  s.subgraph = Standardizer::fit(sub);
  s.mcs = Standardizer::fit(mcs);
  s.meta = Standardizer::fit(meta);
  return s;
}

inline FeatureBundle assemble(const RawFeatures& raw, const FeatureSchema& schema) {
  return {raw.plan_id, schema.subgraph.apply(raw.subgraph), schema.mcs.apply(raw.mcs), schema.meta.apply(raw.meta)};
}

inline FeatureBundle assemble(const std::string& plan_id, const LabeledGraph& graph, const SegmentedRaster& raster,
                              const FeatureContext& ctx, const FeatureSchema& schema) {
  schema.check(ctx);
  return assemble(raw_features(plan_id, graph, raster, ctx), schema);
}

/// One JSON object per plan, tagged with the schema fingerprint.
inline std::string write_feature_store(const std::vector<FeatureBundle>& bundles, const FeatureSchema& schema) {
  const auto fp = schema.fingerprint();
  std::string out;
  for (const auto& b : bundles) {
    Json j{{"plan_id", b.plan_id}, {"schema", fp}, {"subgraph", b.subgraph}, {"mcs", b.mcs}, {"meta", b.meta}};
    out += j.dump() + "\n";
  }
  return out;
}

inline std::vector<FeatureBundle> read_feature_store(std::string_view text, const FeatureSchema& schema) {
  const auto fp = schema.fingerprint();
  const auto len = schema.lengths();
  std::vector<FeatureBundle> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = parse_json(line, "feature row");
    try {
      if (j.at("schema").get<std::string>() != fp) {
        throw Error(ErrorCode::kSchemaMismatch, "feature row fitted under a different schema");
      }
      FeatureBundle b{j.at("plan_id").get<std::string>(), j.at("subgraph").get<std::vector<double>>(),
                      j.at("mcs").get<std::vector<double>>(), j.at("meta").get<std::vector<double>>()};
      if (b.subgraph.size() != len[0] || b.mcs.size() != len[1] || b.meta.size() != len[2]) {
        throw Error(ErrorCode::kSchemaMismatch, "feature row lengths differ from the schema");
      }
      out.push_back(std::move(b));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kMalformedJson, std::string("feature row: ") + e.what());
    }
  }
  return out;
}

}  // namespace planscore
