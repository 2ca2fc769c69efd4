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

#include <atomic>
#include <random>
#include <thread>
#include <tuple>

#include "planscore/server.hpp"
#include "planscore/synth.hpp"

namespace planscore {
namespace {

std::vector<CatalogEntry> random_entries(int n, std::uint64_t seed, const std::string& prefix = "p") {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> beds(1, 6);
  std::uniform_real_distribution<double> area(30.0, 150.0);
  std::vector<CatalogEntry> out;
  for (int i = 0; i < n; ++i) {
    CatalogEntry e;
    e.plan_id = prefix + std::to_string(i);
    e.bedrooms = beds(rng);
    e.total_area_m2 = std::round(area(rng));
    // coarse values so ties actually happen
    for (int q = 0; q < kScoreItemCount; ++q) e.scores[q] = std::round(u(rng) * 4) / 4;
    out.push_back(e);
  }
  return out;
}

SearchQuery random_query(std::mt19937_64& rng) {
  SearchQuery q;
  for (auto& w : q.weights) w = static_cast<int>(rng() % 3);
  if (rng() % 2) q.bedrooms = 1 + static_cast<int>(rng() % 4);
  if (rng() % 2) q.min_area = 30.0 + static_cast<double>(rng() % 60);
  if (rng() % 2) q.max_area = (q.min_area ? *q.min_area : 30.0) + static_cast<double>(rng() % 90);
  q.limit = 1 + static_cast<int>(rng() % 250);
  return q;
}

// Brute force: filter, score, full sort on a tuple key, cut.
std::vector<std::string> oracle_rank(const SearchQuery& q, const std::vector<CatalogEntry>& entries) {
  std::vector<std::tuple<double, double, std::string>> keyed;
  for (const auto& e : entries) {
    if (q.bedrooms) {
      const bool ok = *q.bedrooms == 4 ? e.bedrooms >= 4 : e.bedrooms == *q.bedrooms;
      if (!ok) continue;
    }
    if (q.min_area && e.total_area_m2 < *q.min_area) continue;
    if (q.max_area && e.total_area_m2 > *q.max_area) continue;
    double c = 0;
    for (int k = 0; k < 9; ++k) c += q.weights[static_cast<std::size_t>(k)] * e.scores[k];
    keyed.emplace_back(-c, -e.scores[9], e.plan_id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < keyed.size() && static_cast<int>(i) < q.limit; ++i) ids.push_back(std::get<2>(keyed[i]));
  return ids;
}

std::vector<std::string> ids_of(const std::vector<RankedEntry>& r) {
  std::vector<std::string> out;
  for (const auto& x : r) out.push_back(x.entry.plan_id);
  return out;
}

TEST(Rank, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto entries = random_entries(200, seed);
    const auto catalog = make_catalog(entries);
    std::mt19937_64 rng(seed + 100);
    for (int i = 0; i < 100; ++i) {
      const auto q = random_query(rng);
      ASSERT_EQ(ids_of(rank(q, catalog)), oracle_rank(q, entries)) << "seed " << seed << " query " << i;
    }
  }
}

TEST(Rank, ZeroWeightsOrderByTotal) {
  const auto entries = random_entries(50, 3);
  SearchQuery q;
  q.limit = 50;
  const auto r = rank(q, make_catalog(entries));
  for (std::size_t i = 1; i < r.size(); ++i) {
    EXPECT_GE(r[i - 1].entry.scores[kTotalIndex], r[i].entry.scores[kTotalIndex]);
    EXPECT_EQ(r[i].composite, 0.0);
  }
}

TEST(Rank, SingleWeightOrdersByThatCriterion) {
  const auto entries = random_entries(80, 4);
  for (int k = 0; k < 9; ++k) {
    SearchQuery q;
    q.weights[static_cast<std::size_t>(k)] = 2;
    q.limit = 80;
    const auto r = rank(q, make_catalog(entries));
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(r[i - 1].entry.scores[k], r[i].entry.scores[k]);
  }
}

TEST(Rank, PermutationInvariant) {
  auto entries = random_entries(200, 5);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto q = random_query(rng);
    const auto before = ids_of(rank(q, make_catalog(entries)));
    auto shuffled = entries;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(ids_of(rank(q, make_catalog(shuffled))), before);
  }
}

TEST(Rank, WeightScalingKeepsOrder) {
  const auto entries = random_entries(200, 7);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    auto q = random_query(rng);
    for (auto& w : q.weights) w = w > 0 ? 1 : 0;
    auto doubled = q;
    for (auto& w : doubled.weights) w *= 2;
    EXPECT_EQ(ids_of(rank(q, make_catalog(entries))), ids_of(rank(doubled, make_catalog(entries))));
  }
}

TEST(Rank, Filters) {
  const auto entries = random_entries(200, 9);
  const auto catalog = make_catalog(entries);
  SearchQuery q;
  q.limit = 1000;
  q.bedrooms = 2;
  const auto r = rank(q, catalog);
  EXPECT_FALSE(r.empty());
  for (const auto& x : r) EXPECT_EQ(x.entry.bedrooms, 2);
  q.bedrooms = 4;
  const auto r4 = rank(q, catalog);
  std::size_t expected = 0;
  for (const auto& e : entries) expected += e.bedrooms >= 4;
  EXPECT_EQ(r4.size(), expected);
  q.bedrooms.reset();
  q.min_area = 60;
  q.max_area = 90;
  for (const auto& x : rank(q, catalog)) {
    EXPECT_GE(x.entry.total_area_m2, 60);
    EXPECT_LE(x.entry.total_area_m2, 90);
  }
}

TEST(Rank, Errors) {
  const auto catalog = make_catalog(random_entries(5, 1));
  SearchQuery q;
  q.weights[0] = 3;
  try {
    rank(q, catalog);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidWeight);
  }
  q.weights[0] = 1;
  q.min_area = 10;
  q.max_area = 5;
  try {
    rank(q, catalog);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidAreaRange);
  }
}

TEST(Catalog, EmptyAndRoundTrip) {
  const auto empty = parse_catalog("");
  EXPECT_EQ(empty.size(), 0u);
  EXPECT_TRUE(rank(SearchQuery{}, empty).empty());
  const auto entries = random_entries(20, 2);
  const auto back = parse_catalog(write_catalog_jsonl(entries));
  ASSERT_EQ(back.size(), 20u);
  EXPECT_EQ(back.entries, entries);
}

TEST(Catalog, Errors) {
  auto text = write_catalog_jsonl(random_entries(3, 1));
  try {
    parse_catalog(text + write_catalog_jsonl(random_entries(1, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicatePlanId);
  }
  try {
    parse_catalog(text + "{\"plan_id\": \"x\"}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedEntry);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  auto bad = random_entries(1, 5, "z");
  bad[0].total_area_m2 = 0;
  EXPECT_THROW(parse_catalog(write_catalog_jsonl(bad)), Error);
}

TEST(Catalog, PaperScaleLoads) {
  const auto catalog = parse_catalog(write_catalog_jsonl(random_entries(1535, 11)));
  EXPECT_EQ(catalog.size(), 1535u);
  SearchQuery q;
  q.weights = {2, 1, 0, 0, 1, 2, 0, 0, 1};
  EXPECT_EQ(rank(q, catalog).size(), 20u);
}

TEST(Query, FromParams) {
  const auto q = query_from_params({{"w1", "2"}, {"w9", "1"}, {"bedrooms", "3"}, {"limit", "5"}, {"min_area", "40.5"}});
  EXPECT_EQ(q.weights[0], 2);
  EXPECT_EQ(q.weights[8], 1);
  EXPECT_EQ(*q.bedrooms, 3);
  EXPECT_EQ(q.limit, 5);
  EXPECT_DOUBLE_EQ(*q.min_area, 40.5);
  for (const auto& bad : std::vector<std::multimap<std::string, std::string>>{{{"w1", "3"}}, {{"w2", "x"}}, {{"w3", "-1"}}}) {
    try {
      query_from_params(bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidWeight);
    }
  }
  EXPECT_THROW(query_from_params({{"min_area", "9"}, {"max_area", "3"}}), Error);
  EXPECT_THROW(query_from_params({{"limit", "0"}}), Error);
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("planscore_srv_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
    auto entries = random_entries(30, 1, "a");
    const auto rasters = generate_corpus(2, 5);
    for (int i = 0; i < 2; ++i) {
      const auto name = "r" + std::to_string(i) + ".json";
      write_file(dir_ / name, serialize_raster(rasters[static_cast<std::size_t>(i)]));
      entries[static_cast<std::size_t>(i)].raster = name;
    }
    write_file(dir_ / "catalog.jsonl", write_catalog_jsonl(entries));
    store_.swap(load_catalog(dir_ / "catalog.jsonl"));
    server_ = std::make_unique<SearchServer>(store_, ServerOptions{"127.0.0.1", 0, {}});
    server_->start();
  }
  void TearDown() override {
    server_->stop();
    std::filesystem::remove_all(dir_);
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", server_->port()); }

  std::filesystem::path dir_;
  CatalogStore store_;
  std::unique_ptr<SearchServer> server_;
};

TEST_F(ServerTest, Health) {
  auto res = client().Get("/api/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto j = Json::parse(res->body);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["catalog_size"], 30);
}

TEST_F(ServerTest, SearchMatchesRank) {
  auto res = client().Get("/api/search?w1=2&limit=5");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  SearchQuery q;
  q.weights[0] = 2;
  q.limit = 5;
  EXPECT_EQ(Json::parse(res->body), ranked_to_json(rank(q, *store_.snapshot())));
  EXPECT_EQ(Json::parse(res->body)["results"].size(), 5u);
}

TEST_F(ServerTest, RandomQueriesMatchRank) {
  std::mt19937_64 rng(3);
  auto c = client();
  for (int i = 0; i < 50; ++i) {
    const auto q = random_query(rng);
    std::string url = "/api/search?limit=" + std::to_string(q.limit);
    for (int k = 0; k < 9; ++k) url += "&w" + std::to_string(k + 1) + "=" + std::to_string(q.weights[static_cast<std::size_t>(k)]);
    if (q.bedrooms) url += "&bedrooms=" + std::to_string(*q.bedrooms);
    if (q.min_area) url += "&min_area=" + std::to_string(*q.min_area);
    if (q.max_area) url += "&max_area=" + std::to_string(*q.max_area);
    auto res = c.Get(url);
    ASSERT_TRUE(res);
    EXPECT_EQ(Json::parse(res->body), ranked_to_json(rank(q, *store_.snapshot()))) << url;
  }
}

TEST_F(ServerTest, BadRequests) {
  auto c = client();
  for (const char* url : {"/api/search?w1=3", "/api/search?w4=abc", "/api/search?min_area=5&max_area=1"}) {
    auto res = c.Get(url);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << url;
  }
  auto res = c.Get("/api/plans/unknown");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
}

TEST_F(ServerTest, PlanDetail) {
  auto res = client().Get("/api/plans/a0");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto j = Json::parse(res->body);
  EXPECT_EQ(j["entry"]["plan_id"], "a0");
  const auto raster = raster_from_json(j["raster"]);
  EXPECT_EQ(graph_from_json(j["graph"]), build_graph(raster));
  auto no_raster = client().Get("/api/plans/a5");
  ASSERT_TRUE(no_raster);
  EXPECT_EQ(no_raster->status, 200);
  EXPECT_TRUE(Json::parse(no_raster->body)["raster"].is_null());
}

TEST_F(ServerTest, SwapUnderConcurrentQueries) {
  const auto a = make_catalog(random_entries(200, 1, "a"));
  const auto b = make_catalog(random_entries(150, 2, "b"));
  store_.swap(a);
  std::atomic<int> mixed{0}, failed{0}, seen_a{0}, seen_b{0};
  std::atomic<bool> go{false};
  std::vector<std::thread> clients;
  for (int t = 0; t < 100; ++t) {
    clients.emplace_back([&, t] {
      while (!go) std::this_thread::yield();
      auto c = client();
      auto res = c.Get("/api/search?w" + std::to_string(1 + t % 9) + "=2&limit=100");
      if (!res || res->status != 200) {
        ++failed;
        return;
      }
      const auto j = Json::parse(res->body);
      std::set<char> prefixes;
      for (const auto& r : j["results"]) prefixes.insert(r["plan_id"].get<std::string>()[0]);
      if (prefixes.size() != 1) ++mixed;
      (prefixes.count('a') ? seen_a : seen_b)++;
    });
  }
  go = true;
  for (int i = 0; i < 20; ++i) {
    store_.swap(i % 2 ? a : b);
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  for (auto& th : clients) th.join();
  EXPECT_EQ(failed, 0);
  EXPECT_EQ(mixed, 0);
  EXPECT_EQ(seen_a + seen_b, 100);
}

TEST(Server, BindFailure) {
  CatalogStore store;
  SearchServer first(store, ServerOptions{"127.0.0.1", 0, {}});
  const int port = first.bind();
  SearchServer second(store, ServerOptions{"127.0.0.1", port, {}});
  try {
    second.bind();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBindFailure);
  }
}

}  // namespace
}  // namespace planscore
