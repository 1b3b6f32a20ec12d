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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iostream>
#include <numeric>

#include "learnfuzz/datagen.h"
#include "learnfuzz/errors.h"
#include "learnfuzz/learners.h"
#include "learnfuzz/rng.h"

namespace learnfuzz {

EvalReport evaluate(const TrainedModel& m, const FeatureMatrix& X, std::span<const int> y) {
  const Prediction p = m.predict_batch(X);
  return precision_recall(confusion(p.labels, y));
}

std::vector<int> make_folds(std::span<const int> y, int k, uint64_t seed, bool* stratified) {
  const size_t n = y.size();
  if (k < 2) throw CVError("k must be >= 2");
  if (static_cast<size_t>(k) > n) {
    throw CVError("k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " samples");
  }
  size_t pos = 0;
  for (int v : y) pos += v != 0;
  const bool strat = pos >= static_cast<size_t>(k) && n - pos >= static_cast<size_t>(k);
  if (stratified) *stratified = strat;

  Rng rng(seed);
  std::vector<int> fold(n, 0);
  auto deal = [&](std::vector<size_t> idx, size_t offset) {
    rng.shuffle(std::span<size_t>(idx));
    for (size_t j = 0; j < idx.size(); ++j) fold[idx[j]] = static_cast<int>((j + offset) % k);
    return idx.size();
  };
  if (strat) {
    std::vector<size_t> neg_idx, pos_idx;
    for (size_t i = 0; i < n; ++i) (y[i] ? pos_idx : neg_idx).push_back(i);
    const size_t used = deal(std::move(neg_idx), 0);
    // Continue the deal where the first class stopped to balance fold sizes.
    deal(std::move(pos_idx), used % k);
  } else {
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    deal(std::move(all), 0);
  }
  return fold;
}

namespace {

CVReport::Summary summarize(const std::vector<FoldResult>& folds,
                            std::optional<double> EvalReport::*field) {
  std::vector<double> xs;
  for (const auto& f : folds) {
    if (const auto& v = f.report.*field) xs.push_back(*v);
  }
  CVReport::Summary s;
  s.defined = xs.size();
  if (xs.empty()) return s;
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  s.mean = m;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

CVReport cross_validate(const TrainConfig& cfg, const FeatureMatrix& X,
                        std::span<const int> y, int k, uint64_t seed) {
  if (y.size() != X.rows()) throw CVError("label count does not match rows");
  CVReport rep;
  const std::vector<int> fold = make_folds(y, k, seed, &rep.stratified);
  if (!rep.stratified) {
    std::cerr << "warning: a class has fewer than " << k
              << " samples; using unstratified folds\n";
  }
  for (int f = 0; f < k; ++f) {
    std::vector<size_t> tr, te;
    for (size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? te : tr).push_back(i);
    std::vector<int> ytr, yte;
    for (size_t i : tr) ytr.push_back(y[i]);
    for (size_t i : te) yte.push_back(y[i]);
    TrainConfig c = cfg;
    c.seed = derive_seed(cfg.seed, "cv", static_cast<uint64_t>(f));
    const TrainedModel m = train(X.take(tr), ytr, c);
    rep.folds.push_back({evaluate(m, X.take(te), yte), tr.size(), te.size()});
  }
  rep.precision = summarize(rep.folds, &EvalReport::precision);
  rep.recall = summarize(rep.folds, &EvalReport::recall);
  rep.accuracy = summarize(rep.folds, &EvalReport::accuracy);
  rep.f1 = summarize(rep.folds, &EvalReport::f1);
  return rep;
}

Leaderboard fit_leaderboard(const FeatureMatrix& X, std::span<const int> y, uint64_t seed,
                            uint64_t schema_hash, std::span<const Family> families) {
  if (X.rows() == 0) throw LeaderboardError("empty training set");
  if (families.empty()) throw LeaderboardError("no model families requested");
  const std::vector<int> labels(y.begin(), y.end());

  std::vector<size_t> tr, va;
  try {
    std::tie(tr, va) = stratified_split_indices(labels, 0.75, derive_seed(seed, "leaderboard"));
  } catch (const DegenerateSplitError& e) {
    throw LeaderboardError(std::string("cannot hold out a validation set: ") + e.what());
  }
  const FeatureMatrix Xtr = X.take(tr);
  const FeatureMatrix Xva = X.take(va);
  std::vector<int> ytr, yva;
  for (size_t i : tr) ytr.push_back(labels[i]);
  for (size_t i : va) yva.push_back(labels[i]);

  std::vector<std::future<LeaderboardEntry>> jobs;
  for (Family f : families) {
    jobs.push_back(std::async(std::launch::async, [&, f] {
      LeaderboardEntry e{f, {}, {}, {}, {}, 0.0, {}};
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const TrainedModel m = train(Xtr, ytr, TrainConfig::defaults(f, seed));
        e.train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const EvalReport r = evaluate(m, Xva, yva);
        e.f1 = r.f1;
        e.accuracy = r.accuracy;
        e.precision = r.precision;
        e.recall = r.recall;
      } catch (const Error& ex) {
        e.error = ex.what();
      }
      return e;
    }));
  }
  Leaderboard lb;
  for (auto& j : jobs) lb.entries.push_back(j.get());

  auto key = [](const std::optional<double>& v) { return v ? *v : -1.0; };
  std::stable_sort(lb.entries.begin(), lb.entries.end(),
                   [&](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                     if (a.error.empty() != b.error.empty()) return a.error.empty();
                     if (key(a.f1) != key(b.f1)) return key(a.f1) > key(b.f1);
                     if (key(a.accuracy) != key(b.accuracy)) {
                       return key(a.accuracy) > key(b.accuracy);
                     }
                     return family_name(a.family) < family_name(b.family);
                   });
  if (!lb.entries.front().error.empty()) {
    throw LeaderboardError("every model family failed: " + lb.entries.front().error);
  }
  TrainedModel best = train(X, labels, TrainConfig::defaults(lb.top().family, seed));
  best.set_schema_hash(schema_hash);
  lb.best = std::move(best);
  return lb;
}

}  // namespace learnfuzz
