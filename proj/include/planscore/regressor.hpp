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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "planscore/error.hpp"
#include "planscore/features.hpp"
#include "planscore/raster.hpp"

namespace planscore {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

struct RegressorConfig {
  int hidden = 256;
  double slope = 0.01;    // leaky ReLU
  double dropout = 0.5;   // drop probability in both dropout layers
  double bn_eps = 1e-8;
  double bn_momentum = 0.99;
};

struct TrainConfig {
  int batch_size = 20;
  double lr = 1e-3;
  double decay = 2.86e-5;
  double momentum = 0.9;
  int epochs = 35;
  std::uint64_t seed = 0;
  RegressorConfig model;
};

/// Structured branch: three projections summed, FC + batch norm + dropout,
/// FC + dropout, then a scalar output.
struct RegressorParams {
  RegressorConfig config;
  MatrixXd ws, wm, wt, w1, w2;
  VectorXd bs, bm, bt, b1, gamma, beta, b2, w3;
  double b3 = 0.0;
  VectorXd run_mean, run_var;

  int dim_subgraph() const { return static_cast<int>(ws.cols()); }
  int dim_mcs() const { return static_cast<int>(wm.cols()); }
  int dim_meta() const { return static_cast<int>(wt.cols()); }
  int hidden() const { return static_cast<int>(w1.rows()); }

  /// He-uniform weights (limit sqrt(6 / fan_in)), zero biases, unit BN scale.
  static RegressorParams init(int ds, int dm, int dt, const RegressorConfig& config, std::uint64_t seed) {
    if (config.hidden < 1) throw Error(ErrorCode::kShapeMismatch, "hidden width must be >= 1");
    RegressorParams p;
    p.config = config;
    const int h = config.hidden;
    std::mt19937_64 rng(seed);
    auto uniform = [&](int rows, int cols) {
      const double limit = cols > 0 ? std::sqrt(6.0 / cols) : 0.0;
      std::uniform_real_distribution<double> u(-limit, limit);
      MatrixXd m(rows, cols);
      for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) m(r, c) = u(rng);
      }
      return m;
    };
    p.ws = uniform(h, ds);
    p.wm = uniform(h, dm);
    p.wt = uniform(h, dt);
    p.w1 = uniform(h, h);
    p.w2 = uniform(h, h);
    p.w3 = uniform(1, h).transpose();
    p.bs = p.bm = p.bt = p.b1 = p.beta = p.b2 = VectorXd::Zero(h);
    p.gamma = VectorXd::Ones(h);
    p.run_mean = VectorXd::Zero(h);
    p.run_var = VectorXd::Ones(h);
    return p;
  }

  /// Trainable tensors in a fixed order, as (name, data, size).
  template <class Self, class F>
  static void for_each_tensor(Self& self, F&& f) {
    f("ws", self.ws.data(), self.ws.size());
    f("bs", self.bs.data(), self.bs.size());
    f("wm", self.wm.data(), self.wm.size());
    f("bm", self.bm.data(), self.bm.size());
    f("wt", self.wt.data(), self.wt.size());
    f("bt", self.bt.data(), self.bt.size());
    f("w1", self.w1.data(), self.w1.size());
    f("b1", self.b1.data(), self.b1.size());
    f("gamma", self.gamma.data(), self.gamma.size());
    f("beta", self.beta.data(), self.beta.size());
    f("w2", self.w2.data(), self.w2.size());
    f("b2", self.b2.data(), self.b2.size());
    f("w3", self.w3.data(), self.w3.size());
    f("b3", &self.b3, Eigen::Index{1});
  }

  RegressorParams zeros_like() const {
    RegressorParams g = *this;
    for_each_tensor(g, [](const char*, double* d, Eigen::Index n) { std::fill(d, d + n, 0.0); });
    return g;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each_tensor(*this, [&](const char*, const double*, Eigen::Index k) { n += static_cast<std::size_t>(k); });
    return n;
  }
};

enum class Mode { kTrain, kEval };

/// Column-per-sample input blocks.
struct Batch {
  MatrixXd xs, xm, xt;
  RowVectorXd target;

  Eigen::Index size() const { return xs.cols(); }
};

inline Batch make_batch(const std::vector<const FeatureBundle*>& rows, const std::vector<double>& targets,
                        const RegressorParams& p) {
  if (rows.empty()) throw Error(ErrorCode::kShapeMismatch, "empty batch");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Batch b;
  b.xs.resize(p.dim_subgraph(), n);
  b.xm.resize(p.dim_mcs(), n);
  b.xt.resize(p.dim_meta(), n);
  b.target = RowVectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = *rows[static_cast<std::size_t>(i)];
    if (static_cast<int>(r.subgraph.size()) != p.dim_subgraph() || static_cast<int>(r.mcs.size()) != p.dim_mcs() ||
        static_cast<int>(r.meta.size()) != p.dim_meta()) {
      throw Error(ErrorCode::kShapeMismatch, "feature bundle " + r.plan_id + " does not match the model inputs");
    }
    b.xs.col(i) = Eigen::Map<const VectorXd>(r.subgraph.data(), p.dim_subgraph());
    b.xm.col(i) = Eigen::Map<const VectorXd>(r.mcs.data(), p.dim_mcs());
    b.xt.col(i) = Eigen::Map<const VectorXd>(r.meta.data(), p.dim_meta());
    if (!targets.empty()) b.target(i) = targets[static_cast<std::size_t>(i)];
  }
  return b;
}

struct ForwardCache {
  MatrixXd as, am, at, h0, z1, xhat, d1, z2, d2, mask1, mask2;
  VectorXd mean, var, inv_std;
  RowVectorXd y;
};

namespace detail {

inline MatrixXd lrelu(const MatrixXd& x, double a) { return x.unaryExpr([a](double v) { return v > 0 ? v : a * v; }); }
inline MatrixXd lrelu_grad(const MatrixXd& x, double a) {
  return x.unaryExpr([a](double v) { return v > 0 ? 1.0 : a; });
}

inline MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64* rng) {
  if (rate <= 0.0 || rng == nullptr) return MatrixXd::Ones(rows, cols);
  std::bernoulli_distribution keep(1.0 - rate);
  MatrixXd m(rows, cols);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = keep(*rng) ? scale : 0.0;
  }
  return m;
}

}  // namespace detail

/// Forward pass. Train mode uses batch statistics and dropout (masks drawn
/// from `rng`; a null rng disables dropout); eval mode uses running
/// statistics and no dropout.
inline ForwardCache forward(const RegressorParams& p, const Batch& b, Mode mode, std::mt19937_64* rng = nullptr) {
  const double a = p.config.slope;
  ForwardCache c;
  c.as = (p.ws * b.xs).colwise() + p.bs;
  c.am = (p.wm * b.xm).colwise() + p.bm;
  c.at = (p.wt * b.xt).colwise() + p.bt;
  c.h0 = detail::lrelu(c.as, a) + detail::lrelu(c.am, a) + detail::lrelu(c.at, a);
  c.z1 = (p.w1 * c.h0).colwise() + p.b1;
  const MatrixXd r1 = detail::lrelu(c.z1, a);
  const auto n = b.size();
  if (mode == Mode::kTrain) {
    c.mean = r1.rowwise().mean();
    c.var = (r1.colwise() - c.mean).array().square().rowwise().mean();
  } else {
    c.mean = p.run_mean;
    c.var = p.run_var;
  }
  c.inv_std = (c.var.array() + p.config.bn_eps).rsqrt();
  c.xhat = (r1.colwise() - c.mean).array().colwise() * c.inv_std.array();
  const MatrixXd bn = (c.xhat.array().colwise() * p.gamma.array()).colwise() + p.beta.array();
  const bool drop = mode == Mode::kTrain;
  c.mask1 = detail::dropout_mask(bn.rows(), n, drop ? p.config.dropout : 0.0, rng);
  c.d1 = bn.cwiseProduct(c.mask1);
  c.z2 = (p.w2 * c.d1).colwise() + p.b2;
  c.mask2 = detail::dropout_mask(c.z2.rows(), n, drop ? p.config.dropout : 0.0, rng);
  c.d2 = detail::lrelu(c.z2, a).cwiseProduct(c.mask2);
  c.y = (p.w3.transpose() * c.d2).array() + p.b3;
  return c;
}

inline std::vector<double> predict(const RegressorParams& p, const std::vector<FeatureBundle>& rows) {
  if (rows.empty()) return {};
  std::vector<const FeatureBundle*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  const auto c = forward(p, make_batch(ptrs, {}, p), Mode::kEval);
  return {c.y.data(), c.y.data() + c.y.size()};
}

struct LossAndGrads {
  double mse = 0.0;
  RegressorParams grads;
  ForwardCache cache;
};

/// Mean squared error of a train-mode pass and its gradient with respect to
/// every trainable tensor (batch-norm statistics included in the graph).
inline LossAndGrads loss_and_grads(const RegressorParams& p, const Batch& b, std::mt19937_64* rng = nullptr) {
  const double a = p.config.slope;
  const auto n = static_cast<double>(b.size());
  LossAndGrads out;
  out.cache = forward(p, b, Mode::kTrain, rng);
  const auto& c = out.cache;
  const RowVectorXd diff = c.y - b.target;
  out.mse = diff.squaredNorm() / n;
  auto& g = out.grads;
  g = p.zeros_like();

  const RowVectorXd dy = 2.0 * diff / n;
  g.w3 = c.d2 * dy.transpose();
  g.b3 = dy.sum();
  const MatrixXd dz2 = ((p.w3 * dy).cwiseProduct(c.mask2)).cwiseProduct(detail::lrelu_grad(c.z2, a));
  g.w2 = dz2 * c.d1.transpose();
  g.b2 = dz2.rowwise().sum();
  const MatrixXd dbn = (p.w2.transpose() * dz2).cwiseProduct(c.mask1);
  g.gamma = dbn.cwiseProduct(c.xhat).rowwise().sum();
  g.beta = dbn.rowwise().sum();
  const MatrixXd dxhat = dbn.array().colwise() * p.gamma.array();
  const VectorXd sum_dxhat = dxhat.rowwise().sum();
  const VectorXd sum_dxhat_xhat = dxhat.cwiseProduct(c.xhat).rowwise().sum();
  MatrixXd dr1 = (n * dxhat).colwise() - sum_dxhat;
  dr1 -= (c.xhat.array().colwise() * sum_dxhat_xhat.array()).matrix();
  dr1 = (dr1.array().colwise() * (c.inv_std.array() / n)).matrix();
  const MatrixXd dz1 = dr1.cwiseProduct(detail::lrelu_grad(c.z1, a));
  g.w1 = dz1 * c.h0.transpose();
  g.b1 = dz1.rowwise().sum();
  const MatrixXd dh0 = p.w1.transpose() * dz1;
  const MatrixXd das = dh0.cwiseProduct(detail::lrelu_grad(c.as, a));
  const MatrixXd dam = dh0.cwiseProduct(detail::lrelu_grad(c.am, a));
  const MatrixXd dat = dh0.cwiseProduct(detail::lrelu_grad(c.at, a));
  g.ws = das * b.xs.transpose();
  g.bs = das.rowwise().sum();
  g.wm = dam * b.xm.transpose();
  g.bm = dam.rowwise().sum();
  g.wt = dat * b.xt.transpose();
  g.bt = dat.rowwise().sum();
  return out;
}

inline double evaluate_mse(const RegressorParams& p, const Batch& b) {
  const auto c = forward(p, b, Mode::kEval);
  return (c.y - b.target).squaredNorm() / static_cast<double>(b.size());
}

struct EpochRecord {
  int epoch = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct TrainResult {
  RegressorParams params;  // from the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Momentum SGD (velocity = m * velocity - lr_t * grad, lr_t = lr / (1 +
/// decay * step)) with a seeded shuffle each epoch. Batches with fewer than
/// two rows are skipped because batch statistics need two samples.
inline TrainResult train(const std::vector<FeatureBundle>& train_rows, const std::vector<double>& train_targets,
                         const std::vector<FeatureBundle>& val_rows, const std::vector<double>& val_targets,
                         const TrainConfig& config) {
  if (train_rows.empty() || val_rows.empty()) throw Error(ErrorCode::kEmptySplit, "train and validation splits must be nonempty");
  if (train_rows.size() != train_targets.size() || val_rows.size() != val_targets.size()) {
    throw Error(ErrorCode::kShapeMismatch, "rows and targets differ in length");
  }
  if (config.batch_size < 1 || !(config.lr >= 0.0)) throw Error(ErrorCode::kShapeMismatch, "invalid training config");
  const auto& f = train_rows.front();
  auto params = RegressorParams::init(static_cast<int>(f.subgraph.size()), static_cast<int>(f.mcs.size()),
                                      static_cast<int>(f.meta.size()), config.model, config.seed);
  auto velocity = params.zeros_like();
  std::mt19937_64 rng(config.seed ^ 0x7f4a7c15f39cc0b5ull);

  auto all = [&](const std::vector<FeatureBundle>& rows, const std::vector<double>& targets) {
    std::vector<const FeatureBundle*> ptrs;
    for (const auto& r : rows) ptrs.push_back(&r);
    return make_batch(ptrs, targets, params);
  };
  const Batch train_all = all(train_rows, train_targets);
  const Batch val_all = all(val_rows, val_targets);

  TrainResult result;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(train_rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::int64_t step = 0;
  const double keep = config.model.bn_momentum;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      if (end - start < 2) continue;
      std::vector<const FeatureBundle*> rows;
      std::vector<double> targets;
      for (std::size_t k = start; k < end; ++k) {
        rows.push_back(&train_rows[order[k]]);
        targets.push_back(train_targets[order[k]]);
      }
      const auto lg = loss_and_grads(params, make_batch(rows, targets, params), &rng);
      const double lr = config.lr / (1.0 + config.decay * static_cast<double>(step));
      ++step;
      RegressorParams::for_each_tensor(velocity, [&](const char* name, double* v, Eigen::Index size) {
        double* w = nullptr;
        const double* g = nullptr;
        RegressorParams::for_each_tensor(params, [&](const char* n2, double* d, Eigen::Index) {
          if (std::string_view(n2) == name) w = d;
        });
        RegressorParams::for_each_tensor(lg.grads, [&](const char* n2, const double* d, Eigen::Index) {
          if (std::string_view(n2) == name) g = d;
        });
        for (Eigen::Index i = 0; i < size; ++i) {
          v[i] = config.momentum * v[i] - lr * g[i];
          w[i] += v[i];
        }
      });
      params.run_mean = keep * params.run_mean + (1.0 - keep) * lg.cache.mean;
      params.run_var = keep * params.run_var + (1.0 - keep) * lg.cache.var;
    }
    EpochRecord rec{epoch, evaluate_mse(params, train_all), evaluate_mse(params, val_all)};
    result.history.push_back(rec);
    const double score = std::isfinite(rec.val_mse) ? rec.val_mse : std::numeric_limits<double>::infinity();
    if (score < best || result.history.size() == 1) {
      best = score;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  if (config.epochs < 1) result.params = params;
  return result;
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  std::uint64_t seed = 0;  // the seed actually used after kink resampling
};

/// Central finite differences over every trainable parameter for one small
/// random configuration (dropout off, fixed batch). Seeds whose
/// pre-activations sit within 1e-3 of the leaky-ReLU kink are skipped.
/// Gradients below 1e-5 are compared on an absolute 1e-9 scale: batch norm
/// makes some of them exactly zero and the difference quotient then only
/// carries rounding noise (~1e-10).
inline GradCheckResult gradient_check(std::uint64_t seed, double step = 1e-5) {
  for (std::uint64_t s = seed;; s += 0x9e3779b9ull) {
    std::mt19937_64 rng(s);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RegressorConfig cfg;
    cfg.hidden = pick(3, 6);
    cfg.dropout = 0.0;
    const int ds = pick(1, 4), dm = pick(1, 4), dt = pick(1, 4), n = pick(3, 7);
    const auto p = RegressorParams::init(ds, dm, dt, cfg, rng());
    std::normal_distribution<double> nd(0.0, 1.0);
    Batch b;
    b.xs = MatrixXd::NullaryExpr(ds, n, [&] { return nd(rng); });
    b.xm = MatrixXd::NullaryExpr(dm, n, [&] { return nd(rng); });
    b.xt = MatrixXd::NullaryExpr(dt, n, [&] { return nd(rng); });
    b.target = RowVectorXd::NullaryExpr(n, [&] { return nd(rng); });
    const auto lg = loss_and_grads(p, b);
    double closest = std::numeric_limits<double>::infinity();
    for (const auto* x : {&lg.cache.as, &lg.cache.am, &lg.cache.at, &lg.cache.z1, &lg.cache.z2}) {
      closest = std::min(closest, x->cwiseAbs().minCoeff());
    }
    if (closest < 1e-3) continue;

    GradCheckResult out;
    out.seed = s;
    std::vector<const double*> grads;
    RegressorParams::for_each_tensor(lg.grads, [&](const char*, const double* d, Eigen::Index) { grads.push_back(d); });
    auto probe = p;
    std::size_t t = 0;
    RegressorParams::for_each_tensor(probe, [&](const char* name, double* d, Eigen::Index size) {
      const double* g = grads[t++];
      for (Eigen::Index i = 0; i < size; ++i) {
        const double keep = d[i];
        d[i] = keep + step;
        const double up = loss_and_grads(probe, b).mse;
        d[i] = keep - step;
        const double down = loss_and_grads(probe, b).mse;
        d[i] = keep;
        const double num = (up - down) / (2.0 * step);
        const double rel = std::abs(g[i] - num) / std::max({std::abs(g[i]), std::abs(num), 1e-5});
        if (rel > out.max_rel_error) {
          out.max_rel_error = rel;
          out.worst_tensor = name;
        }
      }
    });
    return out;
  }
}

/// Pearson correlation.
inline double pcc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kShapeMismatch, "pcc inputs differ in length");
  if (x.size() < 2) throw Error(ErrorCode::kConstantSeries, "pcc needs >= 2 pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw Error(ErrorCode::kConstantSeries, "pcc of a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline Json params_to_json(const RegressorParams& p) {
  Json j;
  j["config"] = {{"hidden", p.config.hidden},
                 {"slope", p.config.slope},
                 {"dropout", p.config.dropout},
                 {"bn_eps", p.config.bn_eps},
                 {"bn_momentum", p.config.bn_momentum}};
  j["dims"] = {p.dim_subgraph(), p.dim_mcs(), p.dim_meta()};
  Json tensors;
  RegressorParams::for_each_tensor(p, [&](const char* name, const double* d, Eigen::Index n) {
    tensors[name] = std::vector<double>(d, d + n);
  });
  tensors["run_mean"] = std::vector<double>(p.run_mean.data(), p.run_mean.data() + p.run_mean.size());
  tensors["run_var"] = std::vector<double>(p.run_var.data(), p.run_var.data() + p.run_var.size());
  j["tensors"] = tensors;
  return j;
}

inline RegressorParams params_from_json(const Json& j) {
  try {
    RegressorConfig cfg;
    const auto& c = j.at("config");
    cfg.hidden = c.at("hidden").get<int>();
    cfg.slope = c.at("slope").get<double>();
    cfg.dropout = c.at("dropout").get<double>();
    cfg.bn_eps = c.at("bn_eps").get<double>();
    cfg.bn_momentum = c.at("bn_momentum").get<double>();
    const auto dims = j.at("dims").get<std::vector<int>>();
    if (dims.size() != 3) throw Error(ErrorCode::kShapeMismatch, "model dims");
    auto p = RegressorParams::init(dims[0], dims[1], dims[2], cfg, 0);
    const auto& t = j.at("tensors");
    RegressorParams::for_each_tensor(p, [&](const char* name, double* d, Eigen::Index n) {
      const auto v = t.at(name).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != n) throw Error(ErrorCode::kShapeMismatch, std::string("tensor ") + name);
      std::copy(v.begin(), v.end(), d);
    });
    const auto rm = t.at("run_mean").get<std::vector<double>>();
    const auto rv = t.at("run_var").get<std::vector<double>>();
    if (static_cast<int>(rm.size()) != cfg.hidden || static_cast<int>(rv.size()) != cfg.hidden) {
      throw Error(ErrorCode::kShapeMismatch, "running statistics");
    }
    p.run_mean = Eigen::Map<const VectorXd>(rm.data(), cfg.hidden);
    p.run_var = Eigen::Map<const VectorXd>(rv.data(), cfg.hidden);
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("model file: ") + e.what());
  }
}

/// One model per score item plus the fingerprint of the schema the
/// features were built with.
struct ModelSet {
  std::string schema;
  std::vector<std::pair<int, RegressorParams>> models;  // (score item, params)

  Json to_json() const {
    Json j{{"format", "planscore-model"}, {"version", 1}, {"schema", schema}};
    Json m;
    for (const auto& [item, p] : models) m[std::string(kScoreItemNames[static_cast<std::size_t>(item)])] = params_to_json(p);
    j["models"] = m;
    return j;
  }

  static ModelSet from_json(const Json& j) {
    if (!j.is_object() || j.value("format", "") != "planscore-model") {
      throw Error(ErrorCode::kMalformedJson, "not a model file");
    }
    ModelSet s;
    s.schema = j.at("schema").get<std::string>();
    for (const auto& [name, body] : j.at("models").items()) {
      const auto item = score_item_from_name(name);
      if (!item) throw Error(ErrorCode::kMalformedJson, "unknown score item " + name);
      s.models.emplace_back(*item, params_from_json(body));
    }
    std::sort(s.models.begin(), s.models.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return s;
  }
};

}  // namespace planscore
