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

// Tree-based validity classifiers: CART, extremely randomized trees and
// histogram gradient boosting, plus a constant majority baseline.

#ifndef LEARNFUZZ_LEARNERS_H_
#define LEARNFUZZ_LEARNERS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "learnfuzz/encoder.h"
#include "learnfuzz/metrics.h"

namespace learnfuzz {

enum class Family { kCart, kExtraTrees, kHistGbdt, kMajorityBaseline };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view s);
inline constexpr Family kAllFamilies[] = {Family::kCart, Family::kExtraTrees,
                                          Family::kHistGbdt, Family::kMajorityBaseline};

struct TrainConfig {
  Family family = Family::kHistGbdt;
  int n_trees = 200;
  int max_depth = 6;  // <= 0: unlimited
  double learning_rate = 0.1;
  int n_bins = 32;
  int min_samples_leaf = 5;
  // Fraction of features tried per split (extra_trees); <= 0 selects sqrt(W).
  double feature_subsample = 0.0;
  double l2 = 1.0;
  double threshold = 0.5;
  uint64_t seed = 0;

  static TrainConfig defaults(Family f, uint64_t seed = 0);
  // Throws TrainError on invalid settings.
  void check() const;
};

// A split node sends rows with x[feature] <= threshold to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf score
  bool is_leaf() const { return feature < 0; }
};

// Nodes stored in preorder; the root is nodes[0].
struct Tree {
  std::vector<TreeNode> nodes;
  int depth() const;
  size_t leaf_index(std::span<const double> x) const;
};

struct Prediction {
  std::vector<int> labels;
  std::vector<double> scores;
};

class CompiledForest;

// Scores: raw = bias + sum_t tree_weight * leaf_t, accumulated in tree
// order; hist_gbdt maps raw through a sigmoid, the others use it directly.
// Final scores are clamped to [0, 1].
class TrainedModel {
 public:
  TrainedModel();
  TrainedModel(Family family, std::vector<Tree> trees, double tree_weight, double bias,
               double threshold, size_t n_features, uint64_t schema_hash = 0);
  TrainedModel(const TrainedModel& o);
  TrainedModel& operator=(const TrainedModel& o);
  TrainedModel(TrainedModel&&) noexcept;
  TrainedModel& operator=(TrainedModel&&) noexcept;
  ~TrainedModel();

  Family family() const { return family_; }
  const std::vector<Tree>& trees() const { return trees_; }
  double tree_weight() const { return tree_weight_; }
  double bias() const { return bias_; }
  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }
  size_t n_features() const { return n_features_; }
  uint64_t schema_hash() const { return schema_hash_; }
  void set_schema_hash(uint64_t h) { schema_hash_ = h; }

  // Pre-link accumulator using the first `tree_limit` trees.
  double raw_score(std::span<const double> x, size_t tree_limit) const;
  double score(std::span<const double> x) const;

  // Throws PredictError on a width mismatch. Blocked, tree-major
  // traversal; results are bit-identical to per-row prediction.
  Prediction predict_batch(const FeatureMatrix& X) const;
  // Straightforward per-row traversal of the same compiled trees.
  Prediction predict_rows(const FeatureMatrix& X) const;

 private:
  double link(double raw) const;

  Family family_ = Family::kMajorityBaseline;
  std::vector<Tree> trees_;
  double tree_weight_ = 1.0;
  double bias_ = 0.0;
  double threshold_ = 0.5;
  size_t n_features_ = 0;
  uint64_t schema_hash_ = 0;
  std::unique_ptr<CompiledForest> compiled_;
};

// labels: 1 = valid. Single-class input yields a majority_baseline model
// whatever cfg.family says. Throws TrainError on empty or non-finite input.
TrainedModel train(const FeatureMatrix& X, std::span<const int> y, const TrainConfig& cfg);

// --- evaluation, cross-validation, leaderboard ---

EvalReport evaluate(const TrainedModel& m, const FeatureMatrix& X, std::span<const int> y);

struct FoldResult {
  EvalReport report;
  size_t train_size = 0;
  size_t test_size = 0;
};

struct CVReport {
  std::vector<FoldResult> folds;
  bool stratified = true;
  // Mean / sample sd over folds where the metric is defined.
  struct Summary {
    std::optional<double> mean;
    std::optional<double> sd;
    size_t defined = 0;
  };
  Summary precision, recall, accuracy, f1;
};

// Fold assignment: each class shuffled and dealt round-robin. Falls back to
// unstratified (all samples shuffled and dealt) when a class has fewer than
// k samples; `stratified` reports which was used.
std::vector<int> make_folds(std::span<const int> y, int k, uint64_t seed, bool* stratified);

// Throws CVError when k < 2 or k > n.
CVReport cross_validate(const TrainConfig& cfg, const FeatureMatrix& X,
                        std::span<const int> y, int k, uint64_t seed);

struct LeaderboardEntry {
  Family family;
  std::optional<double> f1;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  double train_seconds = 0.0;
  std::string error;  // non-empty if training failed
};

struct Leaderboard {
  std::vector<LeaderboardEntry> entries;  // best first; failed entries last
  // Best family refit on the full training set.
  std::optional<TrainedModel> best;
  const LeaderboardEntry& top() const { return entries.front(); }
};

// Trains every family on a 75/25 stratified split of (X, y), ranks by
// validation F1 (undefined ranks lowest), then accuracy, then family name,
// and refits the winner on all of (X, y). Throws LeaderboardError if every
// family fails.
Leaderboard fit_leaderboard(const FeatureMatrix& X, std::span<const int> y,
                            uint64_t seed, uint64_t schema_hash = 0,
                            std::span<const Family> families = kAllFamilies);

// --- model files ---

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const TrainedModel& m);
TrainedModel model_from_json(std::string_view text);
// Throws ModelIOError (also for models without trees).
void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_LEARNERS_H_
