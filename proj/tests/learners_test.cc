// Copyright 2026 The learnfuzz Authors
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

#include "learnfuzz/learners.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <thread>

#include "learnfuzz/errors.h"
#include "learnfuzz/rng.h"
#include "oracles/oracles.h"

namespace learnfuzz {
namespace {

struct Data {
  FeatureMatrix X;
  std::vector<int> y;
};

// x0 <= 3 means valid; x1 is noise.
Data Separable(size_t n, uint64_t seed) {
  Rng rng(seed);
  Data d{FeatureMatrix(n, 2), {}};
  for (size_t i = 0; i < n; ++i) {
    d.X.at(i, 0) = static_cast<double>(rng.uniform_int(0, 8));
    d.X.at(i, 1) = static_cast<double>(rng.uniform_int(-5, 5));
    d.y.push_back(d.X.at(i, 0) <= 3 ? 1 : 0);
  }
  return d;
}

Data Xor(size_t n, uint64_t seed) {
  Rng rng(seed);
  Data d{FeatureMatrix(n, 3), {}};
  for (size_t i = 0; i < n; ++i) {
    const int a = rng.bernoulli(0.5), b = rng.bernoulli(0.5);
    d.X.at(i, 0) = a;
    d.X.at(i, 1) = b;
    d.X.at(i, 2) = rng.uniform_real(0, 1);
    d.y.push_back(a ^ b);
  }
  return d;
}

Data Continuous(size_t n, size_t w, uint64_t seed) {
  Rng rng(seed);
  Data d{FeatureMatrix(n, w), {}};
  for (size_t i = 0; i < n; ++i) {
    for (size_t f = 0; f < w; ++f) d.X.at(i, f) = rng.uniform_real(-3, 3);
    const double s = d.X.at(i, 0) + 0.5 * d.X.at(i, 1) * d.X.at(i, 1) - 1.0;
    d.y.push_back(s + rng.uniform_real(-0.3, 0.3) > 0 ? 1 : 0);
  }
  return d;
}

double Accuracy(const TrainedModel& m, const Data& d) {
  const Prediction p = m.predict_batch(d.X);
  size_t ok = 0;
  for (size_t i = 0; i < d.y.size(); ++i) ok += p.labels[i] == d.y[i];
  return static_cast<double>(ok) / d.y.size();
}

TEST(TrainTest, SeparableDataEveryFamily) {
  const Data d = Separable(300, 1);
  for (Family f : {Family::kCart, Family::kExtraTrees, Family::kHistGbdt}) {
    const TrainedModel m = train(d.X, d.y, TrainConfig::defaults(f, 3));
    EXPECT_EQ(m.family(), f);
    EXPECT_EQ(Accuracy(m, d), 1.0) << family_name(f);
  }
}

TEST(TrainTest, XorNeedsDepth) {
  const Data tr = Xor(400, 2), te = Xor(400, 3);
  TrainConfig c = TrainConfig::defaults(Family::kHistGbdt, 1);
  c.n_trees = 50;
  c.max_depth = 2;
  EXPECT_GE(Accuracy(train(tr.X, tr.y, c), te), 0.95);
  TrainConfig stump = TrainConfig::defaults(Family::kCart, 1);
  stump.max_depth = 1;
  EXPECT_LT(Accuracy(train(tr.X, tr.y, stump), te), 0.8);
  EXPECT_GE(Accuracy(train(tr.X, tr.y, TrainConfig::defaults(Family::kExtraTrees, 1)), te),
            0.95);
}

TEST(TrainTest, SingleClassGivesMajorityBaseline) {
  Data d = Separable(50, 4);
  std::fill(d.y.begin(), d.y.end(), 0);
  const TrainedModel m = train(d.X, d.y, TrainConfig::defaults(Family::kHistGbdt));
  EXPECT_EQ(m.family(), Family::kMajorityBaseline);
  const Prediction p = m.predict_batch(d.X);
  for (size_t i = 0; i < p.labels.size(); ++i) {
    EXPECT_EQ(p.labels[i], 0);
    EXPECT_EQ(p.scores[i], 0.0);
  }
}

TEST(TrainTest, RejectsBadInput) {
  const Data d = Separable(20, 5);
  EXPECT_THROW(train(FeatureMatrix(0, 2), {}, TrainConfig{}), TrainError);
  FeatureMatrix bad = d.X;
  bad.at(3, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(train(bad, d.y, TrainConfig{}), TrainError);
  bad.at(3, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(train(bad, d.y, TrainConfig{}), TrainError);
  TrainConfig c;
  c.n_trees = 0;
  EXPECT_THROW(train(d.X, d.y, c), TrainError);
  c = TrainConfig{};
  c.n_bins = 1;
  EXPECT_THROW(c.check(), TrainError);
  c = TrainConfig{};
  c.learning_rate = 0.0;
  EXPECT_THROW(c.check(), TrainError);
  std::vector<int> short_y(d.y.begin(), d.y.end() - 1);
  EXPECT_THROW(train(d.X, short_y, TrainConfig{}), TrainError);
}

TEST(TrainTest, TreeDepthRespectsLimit) {
  const Data d = Continuous(500, 4, 6);
  for (int depth : {1, 3, 6}) {
    TrainConfig c = TrainConfig::defaults(Family::kHistGbdt, 1);
    c.n_trees = 10;
    c.max_depth = depth;
    const TrainedModel m = train(d.X, d.y, c);
    for (const Tree& t : m.trees()) EXPECT_LE(t.depth(), depth);
  }
}

TEST(FamilyTest, Names) {
  for (Family f : kAllFamilies) EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_FALSE(parse_family("catboost"));
}

// --- prediction ---

TEST(PredictTest, EmptyAndWidthMismatch) {
  const Data d = Separable(100, 7);
  const TrainedModel m = train(d.X, d.y, TrainConfig::defaults(Family::kCart));
  const Prediction p = m.predict_batch(FeatureMatrix(0, 2));
  EXPECT_TRUE(p.labels.empty());
  EXPECT_TRUE(p.scores.empty());
  EXPECT_THROW(m.predict_batch(FeatureMatrix(3, 5)), PredictError);
  EXPECT_THROW(m.predict_rows(FeatureMatrix(3, 1)), PredictError);
}

TEST(PredictTest, ScoresInUnitIntervalAndThresholded) {
  const Data d = Continuous(600, 5, 8);
  for (Family f : {Family::kCart, Family::kExtraTrees, Family::kHistGbdt}) {
    TrainedModel m = train(d.X, d.y, TrainConfig::defaults(f, 2));
    m.set_threshold(0.3);
    const Prediction p = m.predict_batch(d.X);
    for (size_t i = 0; i < p.scores.size(); ++i) {
      ASSERT_GE(p.scores[i], 0.0);
      ASSERT_LE(p.scores[i], 1.0);
      ASSERT_EQ(p.labels[i], p.scores[i] >= 0.3 ? 1 : 0);
      ASSERT_EQ(p.scores[i], m.score(d.X.row(i)));
    }
  }
}

bool SameBits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(PredictTest, BatchIsBitIdenticalToRows) {
  const Data d = Continuous(2000, 9, 9);
  for (Family f : {Family::kCart, Family::kExtraTrees, Family::kHistGbdt}) {
    TrainConfig c = TrainConfig::defaults(f, 4);
    if (f == Family::kHistGbdt) c.max_depth = 8;  // beyond the complete-tree layout too
    const TrainedModel m = train(d.X, d.y, c);
    for (size_t n : {1u, 7u, 8u, 9u, 255u, 256u, 257u, 1000u, 2000u}) {
      std::vector<size_t> idx(n);
      for (size_t i = 0; i < n; ++i) idx[i] = (i * 37) % d.X.rows();
      const FeatureMatrix X = d.X.take(idx);
      const Prediction a = m.predict_batch(X);
      const Prediction b = m.predict_rows(X);
      ASSERT_TRUE(SameBits(a.scores, b.scores)) << family_name(f) << " n=" << n;
      ASSERT_EQ(a.labels, b.labels);
    }
  }
}

TEST(PredictTest, WideMatricesUseGenericPath) {
  // 40 columns exceeds what the packed kernels handle.
  const Data d = Continuous(800, 40, 10);
  const TrainedModel m = train(d.X, d.y, TrainConfig::defaults(Family::kHistGbdt, 1));
  EXPECT_TRUE(SameBits(m.predict_batch(d.X).scores, m.predict_rows(d.X).scores));
}

TEST(PredictTest, ConcurrentCallsAgree) {
  const Data d = Continuous(3000, 6, 11);
  const TrainedModel m = train(d.X, d.y, TrainConfig::defaults(Family::kHistGbdt, 1));
  const Prediction want = m.predict_batch(d.X);
  std::vector<Prediction> got(4);
  std::vector<std::thread> ts;
  for (size_t k = 0; k < got.size(); ++k) {
    ts.emplace_back([&, k] { got[k] = m.predict_batch(d.X); });
  }
  for (auto& t : ts) t.join();
  for (const auto& g : got) EXPECT_TRUE(SameBits(g.scores, want.scores));
}

TEST(PredictTest, BoostingAddsOneTreeAtATime) {
  const Data d = Continuous(400, 3, 12);
  TrainConfig c = TrainConfig::defaults(Family::kHistGbdt, 1);
  c.n_trees = 25;
  const TrainedModel m = train(d.X, d.y, c);
  for (size_t i = 0; i < 50; ++i) {
    const auto x = d.X.row(i);
    double acc = m.bias();
    ASSERT_EQ(m.raw_score(x, 0), acc);
    for (size_t t = 0; t < m.trees().size(); ++t) {
      const Tree& tree = m.trees()[t];
      acc += m.tree_weight() * tree.nodes[tree.leaf_index(x)].value;
      ASSERT_EQ(m.raw_score(x, t + 1), acc);
    }
    EXPECT_EQ(m.score(x), std::clamp(1.0 / (1.0 + std::exp(-acc)), 0.0, 1.0));
  }
}

TEST(PredictTest, FeaturePermutationInvariance) {
  const Data d = Continuous(500, 4, 13), fresh = Continuous(300, 4, 14);
  const std::vector<size_t> perm = {2, 0, 3, 1};
  auto permute = [&](const FeatureMatrix& X) {
    FeatureMatrix out(X.rows(), X.cols());
    for (size_t i = 0; i < X.rows(); ++i) {
      for (size_t f = 0; f < X.cols(); ++f) out.at(i, f) = X.at(i, perm[f]);
    }
    return out;
  };
  for (Family f : {Family::kCart, Family::kHistGbdt}) {
    const TrainedModel a = train(d.X, d.y, TrainConfig::defaults(f, 1));
    const TrainedModel b = train(permute(d.X), d.y, TrainConfig::defaults(f, 1));
    EXPECT_EQ(a.predict_batch(fresh.X).labels, b.predict_batch(permute(fresh.X)).labels)
        << family_name(f);
  }
}

// --- brute-force split checks ---

std::vector<std::vector<double>> Rows(const FeatureMatrix& X) {
  std::vector<std::vector<double>> r(X.rows());
  for (size_t i = 0; i < X.rows(); ++i) r[i].assign(X.row(i).begin(), X.row(i).end());
  return r;
}

double Gini(const FeatureMatrix& X, const std::vector<int>& y, int f, double thr) {
  double l[2] = {0, 0}, r[2] = {0, 0};
  for (size_t i = 0; i < X.rows(); ++i) (X.at(i, f) <= thr ? l : r)[y[i]] += 1;
  auto g = [](const double* c) {
    const double m = c[0] + c[1];
    return m == 0 ? 0.0 : 1.0 - (c[0] / m) * (c[0] / m) - (c[1] / m) * (c[1] / m);
  };
  const double n = static_cast<double>(X.rows());
  return ((l[0] + l[1]) * g(l) + (r[0] + r[1]) * g(r)) / n;
}

TEST(SplitOracleTest, CartRootMatchesExhaustiveSearch) {
  Rng rng(21);
  int unique_optimum = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 4 + rng.index(61);
    const size_t w = 1 + rng.index(3);
    Data d{FeatureMatrix(n, w), {}};
    for (size_t i = 0; i < n; ++i) {
      for (size_t f = 0; f < w; ++f) {
        d.X.at(i, f) = static_cast<double>(rng.uniform_int(0, trial % 2 ? 5 : 40));
      }
      d.y.push_back(rng.bernoulli(0.4));
    }
    const auto best = oracles::best_gini_split(Rows(d.X), d.y, 1);
    TrainConfig c = TrainConfig::defaults(Family::kCart);
    c.max_depth = 1;
    const TrainedModel m = train(d.X, d.y, c);
    if (m.family() == Family::kMajorityBaseline) continue;
    const TreeNode& root = m.trees()[0].nodes[0];
    if (best.feature < 0) {
      ASSERT_TRUE(root.is_leaf());
      continue;
    }
    ASSERT_FALSE(root.is_leaf()) << trial;
    EXPECT_NEAR(Gini(d.X, d.y, root.feature, root.threshold), best.score, 1e-12) << trial;
    if (best.ties == 1) {
      ++unique_optimum;
      EXPECT_EQ(root.feature, best.feature) << trial;
      EXPECT_EQ(root.threshold, best.threshold) << trial;
    }
  }
  EXPECT_GT(unique_optimum, 200);
}

TEST(SplitOracleTest, HistogramFirstSplitMatchesExactSplit) {
  Rng rng(22);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 10 + rng.index(150);
    const size_t w = 1 + rng.index(3);
    Data d{FeatureMatrix(n, w), {}};
    for (size_t i = 0; i < n; ++i) {
      for (size_t f = 0; f < w; ++f) d.X.at(i, f) = static_cast<double>(rng.uniform_int(0, 20));
      d.y.push_back(rng.bernoulli(0.3));
    }
    size_t pos = 0;
    for (int v : d.y) pos += v;
    if (pos == 0 || pos == n) continue;
    // First-round gradients of the class-weighted logistic loss: the
    // balanced prior puts every prediction at 0.5.
    const double wpos = static_cast<double>(n - pos) / static_cast<double>(pos);
    std::vector<double> g(n), h(n);
    for (size_t i = 0; i < n; ++i) {
      const double wi = d.y[i] ? wpos : 1.0;
      g[i] = wi * (0.5 - d.y[i]);
      h[i] = wi * 0.25;
    }
    TrainConfig c = TrainConfig::defaults(Family::kHistGbdt);
    c.n_trees = 1;
    c.max_depth = 1;
    c.min_samples_leaf = 1;
    c.n_bins = 64;  // >= distinct values per feature
    const auto best = oracles::best_gain_split(Rows(d.X), g, h, c.l2, 1);
    const TrainedModel m = train(d.X, d.y, c);
    const TreeNode& root = m.trees()[0].nodes[0];
    if (best.feature < 0 || best.score <= 1e-9) continue;
    ASSERT_FALSE(root.is_leaf()) << trial;
    if (best.ties != 1) continue;
    ++compared;
    EXPECT_EQ(root.feature, best.feature) << trial;
    EXPECT_EQ(root.threshold, best.threshold) << trial;
  }
  EXPECT_GT(compared, 100);
}

// --- cross-validation ---

TEST(CrossValidateTest, TwoFoldsOnFourSamples) {
  const std::vector<int> y = {1, 0, 1, 0};
  bool strat = false;
  const auto folds = make_folds(y, 2, 1, &strat);
  EXPECT_TRUE(strat);
  for (int f = 0; f < 2; ++f) {
    int n = 0, p = 0;
    for (size_t i = 0; i < y.size(); ++i) {
      if (folds[i] == f) {
        ++n;
        p += y[i];
      }
    }
    EXPECT_EQ(n, 2);
    EXPECT_EQ(p, 1);
  }
}

TEST(CrossValidateTest, FoldsPartitionTheData) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 5 + rng.index(200);
    std::vector<int> y(n);
    for (auto& v : y) v = rng.bernoulli(rng.uniform01());
    const int k = static_cast<int>(2 + rng.index(4));
    bool strat = false;
    const auto folds = make_folds(y, k, trial, &strat);
    ASSERT_EQ(folds.size(), n);
    std::vector<size_t> sizes(k, 0);
    for (int f : folds) {
      ASSERT_GE(f, 0);
      ASSERT_LT(f, k);
      ++sizes[f];
    }
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    ASSERT_LE(*hi - *lo, 1u);
    EXPECT_EQ(folds, make_folds(y, k, trial, nullptr));
  }
}

TEST(CrossValidateTest, SeparableAndErrors) {
  const Data d = Separable(200, 15);
  const CVReport r = cross_validate(TrainConfig::defaults(Family::kCart), d.X, d.y, 5, 3);
  EXPECT_EQ(r.folds.size(), 5u);
  EXPECT_TRUE(r.stratified);
  EXPECT_EQ(*r.accuracy.mean, 1.0);
  EXPECT_EQ(r.accuracy.defined, 5u);
  size_t total = 0;
  for (const auto& f : r.folds) total += f.test_size;
  EXPECT_EQ(total, 200u);
  EXPECT_THROW(cross_validate(TrainConfig{}, d.X, d.y, 1, 0), CVError);
  const Data small = Separable(3, 1);
  EXPECT_THROW(cross_validate(TrainConfig{}, small.X, small.y, 4, 0), CVError);
}

// --- leaderboard ---

TEST(LeaderboardTest, SeparableDataTopsAtPerfectF1) {
  const Data d = Separable(400, 16);
  const Leaderboard lb = fit_leaderboard(d.X, d.y, 1, 0xabc);
  ASSERT_EQ(lb.entries.size(), 4u);
  EXPECT_EQ(*lb.top().f1, 1.0);
  // Ties on F1 and accuracy fall back to the family name.
  EXPECT_EQ(lb.top().family, Family::kCart);
  ASSERT_TRUE(lb.best);
  EXPECT_EQ(lb.best->schema_hash(), 0xabcu);
  EXPECT_EQ(lb.best->family(), lb.top().family);
  bool has_baseline = false;
  for (const auto& e : lb.entries) has_baseline |= e.family == Family::kMajorityBaseline;
  EXPECT_TRUE(has_baseline);
}

TEST(LeaderboardTest, SortedByF1ThenAccuracy) {
  const Data d = Continuous(800, 5, 17);
  const Leaderboard lb = fit_leaderboard(d.X, d.y, 2);
  for (size_t i = 1; i < lb.entries.size(); ++i) {
    const double a = lb.entries[i - 1].f1.value_or(-1), b = lb.entries[i].f1.value_or(-1);
    ASSERT_GE(a, b);
  }
  EXPECT_EQ(lb.entries.back().family, Family::kMajorityBaseline);
}

TEST(LeaderboardTest, XorFavoursEnsembles) {
  const Data d = Xor(400, 18);
  const Leaderboard lb = fit_leaderboard(d.X, d.y, 3);
  EXPECT_NE(lb.top().family, Family::kMajorityBaseline);
  EXPECT_GE(*lb.top().f1, 0.95);
}

TEST(LeaderboardTest, Failures) {
  EXPECT_THROW(fit_leaderboard(FeatureMatrix(0, 1), {}, 1), LeaderboardError);
  Data d = Separable(40, 19);
  d.X.at(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(fit_leaderboard(d.X, d.y, 1), LeaderboardError);
  const Data one = Separable(1, 1);
  EXPECT_THROW(fit_leaderboard(one.X, one.y, 1), LeaderboardError);
}

// --- model files ---

TEST(ModelIoTest, RoundTripIsBitExact) {
  const Data d = Continuous(2000, 7, 20);
  const Data probe = Continuous(1000, 7, 21);
  for (Family f : kAllFamilies) {
    const TrainedModel m = train(d.X, d.y, TrainConfig::defaults(f, 5));
    const TrainedModel r = model_from_json(model_to_json(m));
    EXPECT_EQ(r.family(), m.family());
    EXPECT_EQ(r.trees().size(), m.trees().size());
    EXPECT_TRUE(SameBits(r.predict_batch(probe.X).scores, m.predict_batch(probe.X).scores))
        << family_name(f);
    EXPECT_EQ(model_to_json(r), model_to_json(m));
  }
}

TEST(ModelIoTest, FilesAndErrors) {
  const Data d = Separable(200, 22);
  TrainedModel m = train(d.X, d.y, TrainConfig::defaults(Family::kHistGbdt, 1));
  m.set_schema_hash(77);
  const auto dir = std::filesystem::temp_directory_path() / "learnfuzz_model_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.json").string();
  save_model(m, path);
  const TrainedModel back = load_model(path);
  EXPECT_EQ(back.schema_hash(), 77u);
  EXPECT_EQ(back.threshold(), m.threshold());

  const std::string text = model_to_json(m);
  EXPECT_THROW(model_from_json(text.substr(0, text.size() / 2)), ModelIOError);
  EXPECT_THROW(model_from_json("{}"), ModelIOError);
  std::string future = text;
  const auto at = future.find("\"version\":1");
  ASSERT_NE(at, std::string::npos);
  future.replace(at, 11, "\"version\":99");
  EXPECT_THROW(model_from_json(future), ModelIOError);
  EXPECT_THROW(load_model((dir / "missing.json").string()), ModelIOError);
  EXPECT_THROW(save_model(TrainedModel(), path), ModelIOError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace learnfuzz
