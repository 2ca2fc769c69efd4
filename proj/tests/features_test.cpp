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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "planscore/extract.hpp"
#include "planscore/features.hpp"
#include "planscore/synth.hpp"

namespace planscore {
namespace {

SegmentedRaster blank(int w, int h, Category fill, double cell = 1.0) {
  SegmentedRaster r;
  r.id = "t";
  r.width = w;
  r.height = h;
  r.cell_size_m2 = cell;
  r.grid.assign(static_cast<std::size_t>(w * h), static_cast<std::uint8_t>(fill));
  return r;
}

TEST(Metadata, AllWall) {
  const auto v = metadata_vector(blank(4, 3, Category::kWall));
  ASSERT_EQ(v.size(), 30u);
  EXPECT_DOUBLE_EQ(v[0], 12.0);
  EXPECT_DOUBLE_EQ(v[1], 1.0);
  for (std::size_t i = 2; i < v.size(); ++i) EXPECT_EQ(v[i], 0.0) << i;
}

TEST(Metadata, TwoBedrooms) {
  auto r = blank(7, 3, Category::kWall, 0.36);
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      r.set(row, col, Category::kWbed);
      r.set(row, col + 4, Category::kWbed);
    }
  }
  const auto v = metadata_vector(r);
  const int c = category_code(Category::kWbed);
  EXPECT_NEAR(v[2 * c], 6.48, 1e-9);
  EXPECT_DOUBLE_EQ(v[2 * c + 1], 2.0);
}

TEST(Standardizer, TwoRows) {
  const auto s = Standardizer::fit({{1.0}, {3.0}});
  EXPECT_DOUBLE_EQ(s.apply({1.0})[0], -1.0);
  EXPECT_DOUBLE_EQ(s.apply({3.0})[0], 1.0);
}

TEST(Standardizer, ConstantColumnMapsToZero) {
  const auto s = Standardizer::fit({{5.0, 1.0}, {5.0, 2.0}, {5.0, 4.0}});
  EXPECT_EQ(s.apply({5.0, 1.0})[0], 0.0);
  EXPECT_EQ(s.apply({123.0, 1.0})[0], 0.0);
}

TEST(Standardizer, TrainingMoments) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<std::vector<double>> rows(50, std::vector<double>(30));
  for (auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = 10.0 * j + (1.0 + j) * nd(rng);
  }
  const auto s = Standardizer::fit(rows);
  for (std::size_t j = 0; j < 30; ++j) {
    double m = 0.0, v = 0.0;
    for (const auto& r : rows) m += s.apply(r)[j];
    m /= 50.0;
    for (const auto& r : rows) v += std::pow(s.apply(r)[j] - m, 2);
    v /= 50.0;
    EXPECT_NEAR(m, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(v), 1.0, 1e-9);
  }
}

TEST(Standardizer, Errors) {
  EXPECT_THROW(Standardizer::fit({{1.0}}), Error);
  try {
    Standardizer::fit({{1.0}});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewRows);
  }
  const auto s = Standardizer::fit({{1.0, 2.0}, {3.0, 5.0}});
  try {
    s.apply({1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

struct Fixture {
  std::vector<SegmentedRaster> rasters;
  std::vector<LabeledGraph> graphs;
  FeatureContext ctx;
};

Fixture make_fixture(int n, int refs) {
  Fixture f;
  f.rasters = generate_corpus(n, 11);
  std::vector<RoomGraph> rooms;
  for (const auto& r : f.rasters) {
    rooms.push_back(build_graph(r));
    f.graphs.push_back(to_labeled(rooms.back()));
  }
  const auto planted = PlantedPatterns::standard();
  for (const auto* g : {&planted.wide_span, &planted.dk_bath, &planted.wet_chain}) {
    VocabEntry e;
    e.code = canonical_string(*g);
    e.graph = *g;
    f.ctx.emerging.entries.push_back(e);
  }
  f.ctx.wet = build_wet_vocab(rooms);
  for (int i = 0; i < refs; ++i) {
    f.ctx.reference_ids.push_back(f.rasters[static_cast<std::size_t>(i)].id);
    f.ctx.reference_graphs.push_back(f.graphs[static_cast<std::size_t>(i)]);
  }
  return f;
}

std::vector<RawFeatures> raws(const Fixture& f, std::size_t lo, std::size_t hi) {
  std::vector<RawFeatures> out;
  for (std::size_t i = lo; i < hi; ++i) out.push_back(raw_features(f.rasters[i].id, f.graphs[i], f.rasters[i], f.ctx));
  return out;
}

TEST(Features, BlockLengths) {
  const auto f = make_fixture(40, 12);
  const auto train = raws(f, 0, 32);
  const auto schema = fit_schema(f.ctx, train);
  const auto len = schema.lengths();
  EXPECT_EQ(len[0], 3 + f.ctx.wet.size());
  EXPECT_EQ(len[1], 12u);
  EXPECT_EQ(len[2], 30u);
  const auto b = assemble(f.rasters[35].id, f.graphs[35], f.rasters[35], f.ctx, schema);
  EXPECT_EQ(b.subgraph.size(), len[0]);
  EXPECT_EQ(b.mcs.size(), len[1]);
  EXPECT_EQ(b.meta.size(), len[2]);
}

TEST(Features, RawBinaryColumnsStayBinary) {
  const auto f = make_fixture(40, 5);
  const auto all = raws(f, 0, 40);
  const auto schema = fit_schema(f.ctx, all);
  for (std::size_t j = 0; j < schema.lengths()[0]; ++j) {
    std::set<double> raw_values, std_values;
    for (const auto& r : all) {
      raw_values.insert(r.subgraph[j]);
      std_values.insert(assemble(r, schema).subgraph[j]);
    }
    for (double v : raw_values) EXPECT_TRUE(v == 0.0 || v == 1.0);
    EXPECT_LE(std_values.size(), 2u);
  }
}

TEST(Features, Deterministic) {
  const auto f = make_fixture(30, 6);
  const auto s1 = fit_schema(f.ctx, raws(f, 0, 24));
  const auto s2 = fit_schema(f.ctx, raws(f, 0, 24));
  EXPECT_EQ(s1.fingerprint(), s2.fingerprint());
  std::vector<FeatureBundle> b1, b2;
  for (const auto& r : raws(f, 0, 30)) {
    b1.push_back(assemble(r, s1));
    b2.push_back(assemble(r, s2));
  }
  EXPECT_EQ(write_feature_store(b1, s1), write_feature_store(b2, s2));
}

TEST(Features, StoreRoundTrip) {
  const auto f = make_fixture(30, 6);
  const auto s = fit_schema(f.ctx, raws(f, 0, 24));
  std::vector<FeatureBundle> rows;
  for (const auto& r : raws(f, 0, 30)) rows.push_back(assemble(r, s));
  const auto back = read_feature_store(write_feature_store(rows, s), s);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].plan_id, rows[i].plan_id);
    EXPECT_EQ(back[i].subgraph, rows[i].subgraph);
    EXPECT_EQ(back[i].mcs, rows[i].mcs);
    EXPECT_EQ(back[i].meta, rows[i].meta);
  }
  const auto s2 = FeatureSchema::from_json(Json::parse(s.to_json().dump()));
  EXPECT_EQ(s2.fingerprint(), s.fingerprint());
}

// Fitting on rows that include test plans changes the fingerprint, and a
// store written under one fit is refused under the other.
TEST(Features, LeakageProbe) {
  const auto f = make_fixture(40, 8);
  const auto train_only = fit_schema(f.ctx, raws(f, 0, 32));
  const auto with_test = fit_schema(f.ctx, raws(f, 0, 40));
  EXPECT_NE(train_only.fingerprint(), with_test.fingerprint());
  std::vector<FeatureBundle> rows;
  for (const auto& r : raws(f, 32, 40)) rows.push_back(assemble(r, with_test));
  const auto text = write_feature_store(rows, with_test);
  try {
    read_feature_store(text, train_only);
    FAIL() << "store accepted under a different fit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

TEST(Features, ContextCheck) {
  auto f = make_fixture(30, 6);
  const auto s = fit_schema(f.ctx, raws(f, 0, 24));
  EXPECT_NO_THROW(s.check(f.ctx));
  f.ctx.emerging.entries.pop_back();
  try {
    s.check(f.ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

}  // namespace
}  // namespace planscore
