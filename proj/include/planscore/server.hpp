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

#include <httplib.h>

#include <charconv>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "planscore/extract.hpp"
#include "planscore/search.hpp"

namespace planscore {

namespace detail {

inline int parse_int(const std::string& key, const std::string& v, ErrorCode code) {
  int out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw Error(code, key + " must be an integer");
  return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(key);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidQuery, key + " must be a number");
  }
}

}  // namespace detail

/// Builds a validated query from URL parameters (bedrooms, min_area,
/// max_area, w1..w9, limit). Unknown parameters are ignored.
inline SearchQuery query_from_params(const std::multimap<std::string, std::string>& params) {
  SearchQuery q;
  for (const auto& [key, value] : params) {
    if (key == "bedrooms") {
      q.bedrooms = detail::parse_int(key, value, ErrorCode::kInvalidQuery);
    } else if (key == "min_area") {
      q.min_area = detail::parse_real(key, value);
    } else if (key == "max_area") {
      q.max_area = detail::parse_real(key, value);
    } else if (key == "limit") {
      q.limit = detail::parse_int(key, value, ErrorCode::kInvalidQuery);
    } else if (key.size() == 2 && key[0] == 'w' && key[1] >= '1' && key[1] <= '9') {
      q.weights[static_cast<std::size_t>(key[1] - '1')] = detail::parse_int(key, value, ErrorCode::kInvalidWeight);
    }
  }
  q.validate();
  return q;
}

inline Json plan_detail_json(const Catalog& catalog, const CatalogEntry& e) {
  Json j{{"entry", catalog_entry_to_json(e)}, {"raster", nullptr}, {"graph", nullptr}};
  try {
    const auto raster = load_entry_raster(catalog, e);
    j["raster"] = raster_to_json(raster);
    j["graph"] = graph_to_json(build_graph(raster));
  } catch (const Error& err) {
    j["raster_error"] = err.what();
  }
  return j;
}

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string static_dir;
};

/// HTTP front end over a CatalogStore. Each request reads one snapshot.
class SearchServer {
 public:
  SearchServer(CatalogStore& store, ServerOptions options) : store_(store), options_(std::move(options)) {
    // no SO_REUSEPORT: a second listener on a taken port must fail
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    routes();
  }

  ~SearchServer() { stop(); }

  /// Binds the listening socket; throws BindFailure.
  int bind() {
    if (options_.port == 0) {
      port_ = server_.bind_to_any_port(options_.host);
    } else {
      port_ = server_.bind_to_port(options_.host, options_.port) ? options_.port : -1;
    }
    if (port_ < 0) {
      throw Error(ErrorCode::kBindFailure, options_.host + ":" + std::to_string(options_.port));
    }
    return port_;
  }

  void listen() { server_.listen_after_bind(); }

  void start() {
    bind();
    thread_ = std::thread([this] { listen(); });
    server_.wait_until_ready();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }

 private:
  static void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void routes() {
    server_.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}, {"catalog_size", store_.snapshot()->size()}});
    });
    server_.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
      const auto snap = store_.snapshot();
      try {
        const auto q = query_from_params(req.params);
        send_json(res, 200, ranked_to_json(rank(q, *snap)));
      } catch (const Error& e) {
        send_json(res, 400, {{"error", error_code_name(e.code())}, {"message", e.what()}});
      }
    });
    server_.Get(R"(/api/plans/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto snap = store_.snapshot();
      const auto* e = snap->find(req.matches[1].str());
      if (!e) {
        send_json(res, 404, {{"error", "NotFound"}, {"message", "unknown plan " + req.matches[1].str()}});
        return;
      }
      send_json(res, 200, plan_detail_json(*snap, *e));
    });
    if (!options_.static_dir.empty()) server_.set_mount_point("/", options_.static_dir);
  }

  CatalogStore& store_;
  ServerOptions options_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace planscore
