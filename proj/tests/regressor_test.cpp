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

#include <cmath>
#include <random>

#include "planscore/regressor.hpp"

namespace planscore {
namespace {

std::vector<FeatureBundle> random_rows(int n, int ds, int dm, int dt, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<FeatureBundle> out;
  for (int i = 0; i < n; ++i) {
    FeatureBundle b;
    b.plan_id = "p" + std::to_string(i);
    for (int k = 0; k < ds; ++k) b.subgraph.push_back(nd(rng));
    for (int k = 0; k < dm; ++k) b.mcs.push_back(nd(rng));
    for (int k = 0; k < dt; ++k) b.meta.push_back(nd(rng));
    out.push_back(b);
  }
  return out;
}

Batch batch_of(const std::vector<FeatureBundle>& rows, const std::vector<double>& t, const RegressorParams& p) {
  std::vector<const FeatureBundle*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  return make_batch(ptrs, t, p);
}

RegressorConfig small(int h, double dropout = 0.0) {
  RegressorConfig c;
  c.hidden = h;
  c.dropout = dropout;
  return c;
}

TEST(Regressor, ZeroWeightsGiveZero) {
  auto p = RegressorParams::init(3, 4, 5, small(8), 1);
  RegressorParams::for_each_tensor(p, [](const char*, double* d, Eigen::Index n) { std::fill(d, d + n, 0.0); });
  for (double y : predict(p, random_rows(6, 3, 4, 5, 2))) EXPECT_EQ(y, 0.0);
}

TEST(Regressor, EvalDeterministic) {
  const auto p = RegressorParams::init(3, 4, 5, small(16, 0.5), 7);
  const auto rows = random_rows(10, 3, 4, 5, 8);
  EXPECT_EQ(predict(p, rows), predict(p, rows));
}

TEST(Regressor, InitShapes) {
  const auto p = RegressorParams::init(48, 60, 30, RegressorConfig{}, 0);
  EXPECT_EQ(p.hidden(), 256);
  EXPECT_EQ(p.ws.rows(), 256);
  EXPECT_EQ(p.ws.cols(), 48);
  EXPECT_LE(p.ws.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 48));
  EXPECT_LE(p.w1.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 256));
  EXPECT_EQ(p.parameter_count(), 256u * (48 + 60 + 30 + 3) + 256u * 256 * 2 + 256u * 4 + 256 + 1);
}

// Plain loops, sample by sample, eval mode.
double reference_forward(const RegressorParams& p, const FeatureBundle& x) {
  const int h = p.hidden();
  const double a = p.config.slope;
  auto lr = [a](double v) { return v > 0 ? v : a * v; };
  std::vector<double> h0(static_cast<std::size_t>(h), 0.0);
  auto branch = [&](const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const std::vector<double>& in) {
    for (int r = 0; r < h; ++r) {
      double s = b(r);
      for (std::size_t c = 0; c < in.size(); ++c) s += w(r, static_cast<Eigen::Index>(c)) * in[c];
      h0[static_cast<std::size_t>(r)] += lr(s);
    }
  };
  branch(p.ws, p.bs, x.subgraph);
  branch(p.wm, p.bm, x.mcs);
  branch(p.wt, p.bt, x.meta);
  std::vector<double> d1(static_cast<std::size_t>(h)), d2(static_cast<std::size_t>(h));
  for (int r = 0; r < h; ++r) {
    double s = p.b1(r);
    for (int c = 0; c < h; ++c) s += p.w1(r, c) * h0[static_cast<std::size_t>(c)];
    const double norm = (lr(s) - p.run_mean(r)) / std::sqrt(p.run_var(r) + p.config.bn_eps);
    d1[static_cast<std::size_t>(r)] = p.gamma(r) * norm + p.beta(r);
  }
  for (int r = 0; r < h; ++r) {
    double s = p.b2(r);
    for (int c = 0; c < h; ++c) s += p.w2(r, c) * d1[static_cast<std::size_t>(c)];
    d2[static_cast<std::size_t>(r)] = lr(s);
  }
  double y = p.b3;
  for (int r = 0; r < h; ++r) y += p.w3(r) * d2[static_cast<std::size_t>(r)];
  return y;
}

TEST(Regressor, MatchesReferenceForward) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 0.3);
  auto p = RegressorParams::init(3, 4, 5, small(12, 0.5), 9);
  for (int r = 0; r < 12; ++r) {
    p.b1(r) = nd(rng);
    p.gamma(r) = 1.0 + nd(rng);
    p.beta(r) = nd(rng);
    p.run_mean(r) = nd(rng);
    p.run_var(r) = 0.5 + std::abs(nd(rng));
  }
  p.b3 = 0.25;
  const auto rows = random_rows(7, 3, 4, 5, 10);
  const auto y = predict(p, rows);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_NEAR(y[i], reference_forward(p, rows[i]), 1e-10);
}

TEST(Regressor, GradientCheck) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = gradient_check(seed);
    EXPECT_LT(r.max_rel_error, 1e-4) << "seed " << seed << " tensor " << r.worst_tensor;
  }
}

TEST(Regressor, PerfectFitHasZeroGradient) {
  auto p = RegressorParams::init(3, 4, 5, small(6), 2);
  RegressorParams::for_each_tensor(p, [](const char*, double* d, Eigen::Index n) { std::fill(d, d + n, 0.0); });
  p.b3 = 0.3;
  const auto rows = random_rows(5, 3, 4, 5, 2);
  const auto lg = loss_and_grads(p, batch_of(rows, std::vector<double>(5, 0.3), p));
  EXPECT_EQ(lg.mse, 0.0);
  RegressorParams::for_each_tensor(lg.grads, [](const char* name, const double* d, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_EQ(d[i], 0.0) << name;
  });
}

TEST(Regressor, SingleSampleOutputBiasGradient) {
  const auto p = RegressorParams::init(3, 4, 5, small(6), 5);
  const auto rows = random_rows(1, 3, 4, 5, 6);
  const auto lg = loss_and_grads(p, batch_of(rows, {0.4}, p));
  EXPECT_NEAR(lg.grads.b3, 2.0 * (lg.cache.y(0) - 0.4), 1e-12);
}

TEST(Regressor, OutputBiasGradientClosedForm) {
  const auto p = RegressorParams::init(3, 4, 5, small(8), 3);
  const auto rows = random_rows(9, 3, 4, 5, 4);
  std::vector<double> t(9, 0.7);
  const auto lg = loss_and_grads(p, batch_of(rows, t, p));
  EXPECT_NEAR(lg.grads.b3, 2.0 * (lg.cache.y.array() - 0.7).mean(), 1e-12);
}

TEST(Regressor, BatchNormMoments) {
  const auto p = RegressorParams::init(3, 4, 5, small(16), 4);
  const auto rows = random_rows(32, 3, 4, 5, 6);
  const auto c = forward(p, batch_of(rows, std::vector<double>(32, 0.0), p), Mode::kTrain);
  for (Eigen::Index r = 0; r < c.xhat.rows(); ++r) {
    const double m = c.xhat.row(r).mean();
    const double v = (c.xhat.row(r).array() - m).square().mean();
    EXPECT_NEAR(m, 0.0, 1e-9);
    if (c.var(r) > 1e-6) EXPECT_NEAR(v, 1.0, 1e-4);
  }
}

TEST(Regressor, DropoutScaling) {
  std::mt19937_64 rng(12);
  const auto m = detail::dropout_mask(100, 100, 0.5, &rng);
  EXPECT_NEAR(m.mean(), 1.0, 0.02);
  const double kept = (m.array() > 0).cast<double>().mean();
  EXPECT_NEAR(kept, 0.5, 0.02);
  for (Eigen::Index i = 0; i < m.size(); ++i) EXPECT_TRUE(m.data()[i] == 0.0 || m.data()[i] == 2.0);
}

TEST(Regressor, DropoutExpectationMatchesEval) {
  const auto p = RegressorParams::init(3, 4, 5, small(4, 0.5), 8);
  const auto rows = random_rows(4, 3, 4, 5, 9);
  const auto b = batch_of(rows, {}, p);
  const auto plain = forward(p, b, Mode::kTrain);  // batch statistics, no dropout
  std::mt19937_64 rng(10);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(plain.d1.rows(), plain.d1.cols());
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) sum += forward(p, b, Mode::kTrain, &rng).d1;
  const Eigen::MatrixXd mean = sum / draws;
  const double scale = plain.d1.cwiseAbs().maxCoeff();
  EXPECT_LE((mean - plain.d1).cwiseAbs().maxCoeff(), 0.02 * scale);
}

TEST(Regressor, DropoutOnlyInTraining) {
  const auto p = RegressorParams::init(3, 4, 5, small(16, 0.5), 4);
  const auto rows = random_rows(8, 3, 4, 5, 6);
  const auto b = batch_of(rows, {}, p);
  std::mt19937_64 rng(1);
  const auto train = forward(p, b, Mode::kTrain, &rng);
  EXPECT_GT((train.mask1.array() == 0.0).count(), 0);
  const auto eval = forward(p, b, Mode::kEval, &rng);
  EXPECT_EQ((eval.mask1.array() == 0.0).count(), 0);
}

TrainConfig quick(int h, double dropout, int epochs, double lr) {
  TrainConfig c;
  c.model = small(h, dropout);
  c.epochs = epochs;
  c.lr = lr;
  c.batch_size = 8;
  c.seed = 17;
  return c;
}

TEST(Train, ZeroLearningRateKeepsWeights) {
  const auto rows = random_rows(30, 3, 4, 5, 1);
  std::vector<double> t(30, 1.0);
  const auto cfg = quick(8, 0.5, 3, 0.0);
  const auto r = train(rows, t, rows, t, cfg);
  const auto init = RegressorParams::init(3, 4, 5, cfg.model, cfg.seed);
  EXPECT_EQ(r.params.ws, init.ws);
  EXPECT_EQ(r.params.w1, init.w1);
  EXPECT_EQ(r.params.gamma, init.gamma);
  EXPECT_EQ(r.params.w3, init.w3);
  EXPECT_EQ(r.params.b3, init.b3);
}

TEST(Train, Deterministic) {
  const auto rows = random_rows(40, 3, 4, 5, 2);
  std::vector<double> t;
  for (const auto& r : rows) t.push_back(r.meta[0]);
  const auto cfg = quick(16, 0.5, 4, 0.01);
  const auto a = train(rows, t, rows, t, cfg);
  const auto b = train(rows, t, rows, t, cfg);
  EXPECT_EQ(params_to_json(a.params).dump(), params_to_json(b.params).dump());
  ASSERT_EQ(a.history.size(), 4u);
  for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].val_mse, b.history[i].val_mse);
}

TEST(Train, KeepsBestValidationEpoch) {
  const auto rows = random_rows(40, 3, 4, 5, 3);
  const auto val = random_rows(10, 3, 4, 5, 4);
  std::vector<double> t, tv;
  std::mt19937_64 rng(8);
  for (std::size_t i = 0; i < rows.size(); ++i) t.push_back(std::normal_distribution<double>(0, 1)(rng));
  for (std::size_t i = 0; i < val.size(); ++i) tv.push_back(std::normal_distribution<double>(0, 1)(rng));
  const auto r = train(rows, t, val, tv, quick(16, 0.5, 12, 0.05));
  double best = 1e300;
  int best_epoch = 0;
  for (const auto& h : r.history) {
    if (h.val_mse < best) {
      best = h.val_mse;
      best_epoch = h.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  std::vector<const FeatureBundle*> ptrs;
  for (const auto& v : val) ptrs.push_back(&v);
  EXPECT_NEAR(evaluate_mse(r.params, make_batch(ptrs, tv, r.params)), best, 1e-12);
}

struct LinearTask {
  std::vector<FeatureBundle> train, val;
  std::vector<double> t, tv;
  double target_var = 0.0;
};

// y = w . meta with no noise; 300 plans split 240 / 30 like the desk-scale corpus.
LinearTask linear_task() {
  LinearTask task;
  task.train = random_rows(240, 4, 8, 30, 21);
  task.val = random_rows(30, 4, 8, 30, 22);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd(0.0, 0.06);
  std::vector<double> w(30);
  for (auto& x : w) x = nd(rng);
  auto target = [&](const FeatureBundle& b) {
    double y = 0.0;
    for (int k = 0; k < 30; ++k) y += w[static_cast<std::size_t>(k)] * b.meta[static_cast<std::size_t>(k)];
    return y;
  };
  for (const auto& r : task.train) task.t.push_back(target(r));
  for (const auto& r : task.val) task.tv.push_back(target(r));
  for (double y : task.tv) task.target_var += y * y / static_cast<double>(task.tv.size());
  return task;
}

TrainConfig linear_config() {
  TrainConfig cfg;
  cfg.model = small(32, 0.0);
  cfg.lr = 5e-2;
  cfg.seed = 3;
  return cfg;
}

TEST(Train, LinearTargetWithin35Epochs) {
  const auto task = linear_task();
  const auto r = train(task.train, task.t, task.val, task.tv, linear_config());
  ASSERT_EQ(r.history.size(), 35u);
  EXPECT_LT(r.history[static_cast<std::size_t>(r.best_epoch - 1)].val_mse, 1e-3);
}

TEST(Train, LinearTargetProgress) {
  const auto task = linear_task();
  const auto r = train(task.train, task.t, task.val, task.tv, linear_config());
  // Predicting zero scores target_var.
  EXPECT_LT(r.history[static_cast<std::size_t>(r.best_epoch - 1)].val_mse, 0.5 * task.target_var);
  EXPECT_LT(r.history.back().train_mse, r.history.front().train_mse);
}

TEST(Train, EmptySplit) {
  const auto rows = random_rows(10, 3, 4, 5, 1);
  std::vector<double> t(10, 0.0);
  try {
    train(rows, t, {}, {}, quick(4, 0.0, 1, 0.01));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySplit);
  }
}

TEST(ModelFile, RoundTrip) {
  ModelSet set;
  set.schema = "abc";
  set.models.emplace_back(3, RegressorParams::init(3, 4, 5, small(6, 0.5), 1));
  set.models.emplace_back(0, RegressorParams::init(3, 4, 5, small(6, 0.5), 2));
  const auto back = ModelSet::from_json(Json::parse(set.to_json().dump()));
  EXPECT_EQ(back.schema, "abc");
  ASSERT_EQ(back.models.size(), 2u);
  EXPECT_EQ(back.models[0].first, 0);
  const auto rows = random_rows(5, 3, 4, 5, 3);
  EXPECT_EQ(predict(back.models[0].second, rows), predict(set.models[1].second, rows));
}

TEST(Pcc, Extremes) {
  EXPECT_NEAR(pcc({1, 2, 3, 4}, {2, 4, 6, 8}), 1.0, 1e-12);
  EXPECT_NEAR(pcc({1, 2, 3, 4}, {8, 6, 4, 2}), -1.0, 1e-12);
}

TEST(Pcc, MatchesTwoPassFormulaAndAffineInvariance) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> x, y;
  for (int i = 0; i < 100; ++i) {
    x.push_back(nd(rng));
    y.push_back(0.4 * x.back() + nd(rng));
  }
  // Oracle: correlation of z-scores.
  auto z = [](std::vector<double> v) {
    double m = 0, s = 0;
    for (double a : v) m += a;
    m /= v.size();
    for (double a : v) s += (a - m) * (a - m);
    s = std::sqrt(s / v.size());
    for (double& a : v) a = (a - m) / s;
    return v;
  };
  const auto zx = z(x), zy = z(y);
  double r = 0;
  for (int i = 0; i < 100; ++i) r += zx[i] * zy[i];
  r /= 100;
  EXPECT_NEAR(pcc(x, y), r, 1e-12);
  std::vector<double> x2;
  for (double a : x) x2.push_back(3.0 * a - 7.0);
  EXPECT_NEAR(pcc(x2, y), pcc(x, y), 1e-12);
}

TEST(Pcc, ConstantSeries) {
  try {
    pcc({1, 1, 1}, {1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstantSeries);
  }
}

}  // namespace
}  // namespace planscore
