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
#include <cmath>
#include <numeric>

#include "learnfuzz/errors.h"
#include "learnfuzz/learners.h"
#include "learnfuzz/rng.h"

namespace learnfuzz {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kCart: return "cart";
    case Family::kExtraTrees: return "extra_trees";
    case Family::kHistGbdt: return "hist_gbdt";
    case Family::kMajorityBaseline: return "majority_baseline";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view s) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == s) return f;
  }
  return std::nullopt;
}

TrainConfig TrainConfig::defaults(Family f, uint64_t seed) {
  TrainConfig c;
  c.family = f;
  c.seed = seed;
  switch (f) {
    case Family::kCart:
      c.n_trees = 1;
      c.max_depth = 12;
      c.min_samples_leaf = 1;
      break;
    case Family::kExtraTrees:
      c.n_trees = 100;
      c.max_depth = 0;
      c.min_samples_leaf = 2;
      break;
    case Family::kHistGbdt:
      c.n_trees = 200;
      c.max_depth = 6;
      c.learning_rate = 0.1;
      c.n_bins = 32;
      c.min_samples_leaf = 5;
      break;
    case Family::kMajorityBaseline:
      c.n_trees = 1;
      c.max_depth = 0;
      c.min_samples_leaf = 1;
      break;
  }
  return c;
}

void TrainConfig::check() const {
  if (n_trees < 1) throw TrainError("n_trees must be >= 1");
  if (n_bins < 2 || n_bins > 256) throw TrainError("n_bins must be in [2, 256]");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw TrainError("learning_rate must be in (0, 1]");
  }
  if (min_samples_leaf < 1) throw TrainError("min_samples_leaf must be >= 1");
  if (feature_subsample > 1.0) throw TrainError("feature_subsample must be <= 1");
  if (l2 < 0.0) throw TrainError("l2 must be >= 0");
}

namespace {

bool depth_ok(int depth, int max_depth) { return max_depth <= 0 || depth < max_depth; }

Tree leaf_tree(double value) {
  Tree t;
  TreeNode n;
  n.value = value;
  t.nodes.push_back(n);
  return t;
}

// ---- CART ----

// Split quality sum_s sum_c n_sc^2 / n_s as an exact fraction num/den.
struct GiniProxy {
  __int128 num = 0;
  __int128 den = 1;
  bool better_than(const GiniProxy& o) const { return num * o.den > o.num * den; }
};

GiniProxy gini_proxy(int64_t l0, int64_t l1, int64_t r0, int64_t r1) {
  const int64_t nl = l0 + l1;
  const int64_t nr = r0 + r1;
  GiniProxy g;
  g.num = static_cast<__int128>(l0 * l0 + l1 * l1) * nr +
          static_cast<__int128>(r0 * r0 + r1 * r1) * nl;
  g.den = static_cast<__int128>(nl) * nr;
  return g;
}

class CartBuilder {
 public:
  CartBuilder(const FeatureMatrix& X, std::span<const int> y, const TrainConfig& cfg)
      : X_(X), y_(y), cfg_(cfg) {}

  Tree build() {
    std::vector<size_t> idx(X_.rows());
    std::iota(idx.begin(), idx.end(), 0);
    grow(idx, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<size_t>& idx, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    int64_t pos = 0;
    for (size_t i : idx) pos += y_[i];
    const int64_t n = static_cast<int64_t>(idx.size());
    tree_.nodes[id].value = static_cast<double>(pos) / static_cast<double>(n);

    if (pos == 0 || pos == n || n < 2 * cfg_.min_samples_leaf ||
        !depth_ok(depth, cfg_.max_depth)) {
      return id;
    }

    int best_f = -1;
    double best_thr = 0.0;
    GiniProxy best;
    std::vector<std::pair<double, int>> col(idx.size());
    for (size_t f = 0; f < X_.cols(); ++f) {
      for (size_t k = 0; k < idx.size(); ++k) col[k] = {X_.at(idx[k], f), y_[idx[k]]};
      std::sort(col.begin(), col.end());
      int64_t l0 = 0, l1 = 0;
      for (size_t k = 0; k + 1 < col.size(); ++k) {
        (col[k].second ? l1 : l0)++;
        if (col[k].first == col[k + 1].first) continue;
        const int64_t nl = static_cast<int64_t>(k + 1);
        if (nl < cfg_.min_samples_leaf || n - nl < cfg_.min_samples_leaf) continue;
        const GiniProxy g = gini_proxy(l0, l1, (n - pos) - l0, pos - l1);
        if (best_f < 0 || g.better_than(best)) {
          best = g;
          best_f = static_cast<int>(f);
          best_thr = col[k].first + (col[k + 1].first - col[k].first) / 2.0;
        }
      }
    }
    if (best_f < 0) return id;

    std::vector<size_t> left, right;
    for (size_t i : idx) (X_.at(i, best_f) > best_thr ? right : left).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    tree_.nodes[id].feature = best_f;
    tree_.nodes[id].threshold = best_thr;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const FeatureMatrix& X_;
  std::span<const int> y_;
  const TrainConfig& cfg_;
  Tree tree_;
};

// ---- extremely randomized trees ----

class ExtraTreeBuilder {
 public:
  ExtraTreeBuilder(const FeatureMatrix& X, std::span<const int> y, const TrainConfig& cfg,
                   uint64_t seed)
      : X_(X), y_(y), cfg_(cfg), rng_(seed), order_(X.cols()) {
    std::iota(order_.begin(), order_.end(), 0);
    const double w = static_cast<double>(X.cols());
    k_ = cfg.feature_subsample > 0.0
             ? std::max<size_t>(1, static_cast<size_t>(std::llround(cfg.feature_subsample * w)))
             : std::max<size_t>(1, static_cast<size_t>(std::floor(std::sqrt(w))));
  }

  Tree build() {
    std::vector<size_t> idx(X_.rows());
    std::iota(idx.begin(), idx.end(), 0);
    grow(idx, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<size_t>& idx, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    size_t pos = 0;
    for (size_t i : idx) pos += static_cast<size_t>(y_[i]);
    const size_t n = idx.size();
    tree_.nodes[id].value = static_cast<double>(pos) / static_cast<double>(n);
    const size_t min_leaf = static_cast<size_t>(cfg_.min_samples_leaf);
    if (pos == 0 || pos == n || n < 2 * min_leaf || !depth_ok(depth, cfg_.max_depth)) {
      return id;
    }

    int best_f = -1;
    double best_thr = 0.0;
    double best_score = -1.0;
    size_t tried = 0;
    // Lazily shuffled feature order; constant features do not count.
    for (size_t j = 0; j < order_.size() && tried < k_; ++j) {
      std::swap(order_[j], order_[j + rng_.index(order_.size() - j)]);
      const size_t f = order_[j];
      double lo = X_.at(idx[0], f), hi = lo;
      for (size_t i : idx) {
        const double v = X_.at(i, f);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(lo < hi)) continue;
      ++tried;
      double thr = rng_.uniform_real(lo, hi);
      if (thr >= hi) thr = lo;  // guard against rounding up to hi
      size_t l0 = 0, l1 = 0;
      for (size_t i : idx) {
        if (!(X_.at(i, f) > thr)) (y_[i] ? l1 : l0)++;
      }
      const size_t nl = l0 + l1;
      const size_t nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const size_t r1 = pos - l1;
      const size_t r0 = nr - r1;
      const double score = static_cast<double>(l0 * l0 + l1 * l1) / nl +
                           static_cast<double>(r0 * r0 + r1 * r1) / nr;
      if (score > best_score) {
        best_score = score;
        best_f = static_cast<int>(f);
        best_thr = thr;
      }
    }
    if (best_f < 0) return id;

    std::vector<size_t> left, right;
    for (size_t i : idx) (X_.at(i, best_f) > best_thr ? right : left).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    tree_.nodes[id].feature = best_f;
    tree_.nodes[id].threshold = best_thr;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const FeatureMatrix& X_;
  std::span<const int> y_;
  const TrainConfig& cfg_;
  Rng rng_;
  std::vector<size_t> order_;
  size_t k_ = 1;
  Tree tree_;
};

// ---- histogram gradient boosting ----

struct Binned {
  std::vector<std::vector<double>> cuts;  // per feature, ascending
  std::vector<uint8_t> bins;              // column-major: bins[f * n + i]
  size_t n = 0;
};

// Equal-frequency cut points placed midway between adjacent distinct
// values; with at most n_bins distinct values every value gets its own bin.
std::vector<double> feature_cuts(std::vector<double> v, int n_bins) {
  std::sort(v.begin(), v.end());
  std::vector<double> uniq;
  std::vector<size_t> cum;  // samples with value <= uniq[i]
  for (size_t i = 0; i < v.size(); ++i) {
    if (uniq.empty() || v[i] != uniq.back()) {
      uniq.push_back(v[i]);
      cum.push_back(0);
    }
    cum.back() = i + 1;
  }
  auto mid = [&](size_t i) { return uniq[i] + (uniq[i + 1] - uniq[i]) / 2.0; };
  std::vector<double> cuts;
  if (uniq.size() <= static_cast<size_t>(n_bins)) {
    for (size_t i = 0; i + 1 < uniq.size(); ++i) cuts.push_back(mid(i));
    return cuts;
  }
  const size_t n = v.size();
  size_t i = 0;
  for (int b = 1; b < n_bins; ++b) {
    const size_t target = (static_cast<size_t>(b) * n + n_bins - 1) / n_bins;
    while (i < uniq.size() && cum[i] < target) ++i;
    if (i + 1 >= uniq.size()) break;
    const double c = mid(i);
    if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
  }
  return cuts;
}

Binned bin_features(const FeatureMatrix& X, int n_bins) {
  Binned b;
  b.n = X.rows();
  b.cuts.resize(X.cols());
  b.bins.resize(X.cols() * X.rows());
  std::vector<double> col(X.rows());
  for (size_t f = 0; f < X.cols(); ++f) {
    for (size_t i = 0; i < X.rows(); ++i) col[i] = X.at(i, f);
    b.cuts[f] = feature_cuts(col, n_bins);
    const auto& c = b.cuts[f];
    for (size_t i = 0; i < X.rows(); ++i) {
      b.bins[f * b.n + i] =
          static_cast<uint8_t>(std::lower_bound(c.begin(), c.end(), col[i]) - c.begin());
    }
  }
  return b;
}

class GbdtTreeBuilder {
 public:
  GbdtTreeBuilder(const Binned& b, const std::vector<double>& g, const std::vector<double>& h,
                  const TrainConfig& cfg)
      : b_(b), g_(g), h_(h), cfg_(cfg) {}

  Tree build(std::vector<size_t> idx) {
    grow(idx, 0);
    return std::move(tree_);
  }

 private:
  struct Bin {
    double g = 0, h = 0;
    size_t c = 0;
  };

  double leaf_value(double G, double H) const { return -G / (H + cfg_.l2); }
  double term(double G, double H) const { return G * G / (H + cfg_.l2); }

  int grow(std::vector<size_t>& idx, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double G = 0, H = 0;
    for (size_t i : idx) {
      G += g_[i];
      H += h_[i];
    }
    tree_.nodes[id].value = leaf_value(G, H);
    const size_t n = idx.size();
    const size_t min_leaf = static_cast<size_t>(cfg_.min_samples_leaf);
    if (n < 2 * min_leaf || !depth_ok(depth, cfg_.max_depth)) return id;

    const double parent = term(G, H);
    int best_f = -1;
    size_t best_bin = 0;
    double best_gain = 0.0;
    std::vector<Bin> hist;
    for (size_t f = 0; f < b_.cuts.size(); ++f) {
      const size_t nb = b_.cuts[f].size() + 1;
      if (nb < 2) continue;
      hist.assign(nb, Bin{});
      const uint8_t* col = b_.bins.data() + f * b_.n;
      for (size_t i : idx) {
        Bin& x = hist[col[i]];
        x.g += g_[i];
        x.h += h_[i];
        ++x.c;
      }
      double gl = 0, hl = 0;
      size_t cl = 0;
      for (size_t k = 0; k + 1 < nb; ++k) {
        gl += hist[k].g;
        hl += hist[k].h;
        cl += hist[k].c;
        if (cl < min_leaf) continue;
        if (n - cl < min_leaf) break;
        const double gain = term(gl, hl) + term(G - gl, H - hl) - parent;
        if (gain > best_gain) {
          best_gain = gain;
          best_f = static_cast<int>(f);
          best_bin = k;
        }
      }
    }
    if (best_f < 0) return id;

    const uint8_t* col = b_.bins.data() + static_cast<size_t>(best_f) * b_.n;
    std::vector<size_t> left, right;
    for (size_t i : idx) (col[i] > best_bin ? right : left).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    tree_.nodes[id].feature = best_f;
    tree_.nodes[id].threshold = b_.cuts[best_f][best_bin];
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const Binned& b_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  const TrainConfig& cfg_;
  Tree tree_;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TrainedModel train_gbdt(const FeatureMatrix& X, std::span<const int> y,
                        const TrainConfig& cfg, size_t pos, size_t neg) {
  const size_t n = X.rows();
  const Binned b = bin_features(X, cfg.n_bins);
  // Positive-class weight balances the logistic loss.
  const double wpos = static_cast<double>(neg) / static_cast<double>(pos);
  const double bias = std::log(wpos * static_cast<double>(pos) / static_cast<double>(neg));
  std::vector<double> F(n, bias), g(n), h(n);
  std::vector<size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<Tree> trees;
  trees.reserve(static_cast<size_t>(cfg.n_trees));
  for (int t = 0; t < cfg.n_trees; ++t) {
    for (size_t i = 0; i < n; ++i) {
      const double p = sigmoid(F[i]);
      const double w = y[i] ? wpos : 1.0;
      g[i] = w * (p - static_cast<double>(y[i]));
      h[i] = w * p * (1.0 - p);
    }
    Tree tree = GbdtTreeBuilder(b, g, h, cfg).build(all);
    for (size_t i = 0; i < n; ++i) {
      F[i] += cfg.learning_rate * tree.nodes[tree.leaf_index(X.row(i))].value;
    }
    trees.push_back(std::move(tree));
  }
  return TrainedModel(Family::kHistGbdt, std::move(trees), cfg.learning_rate, bias,
                      cfg.threshold, X.cols());
}

}  // namespace

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return best;
}

size_t Tree::leaf_index(std::span<const double> x) const {
  size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<size_t>(x[n.feature] > n.threshold ? n.right : n.left);
  }
  return i;
}

TrainedModel train(const FeatureMatrix& X, std::span<const int> y, const TrainConfig& cfg) {
  cfg.check();
  if (X.rows() == 0) throw TrainError("empty training matrix");
  if (y.size() != X.rows()) throw TrainError("label count does not match rows");
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw TrainError("non-finite feature value");
  }
  size_t pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw TrainError("labels must be 0 or 1");
    pos += static_cast<size_t>(v);
  }
  const size_t neg = y.size() - pos;

  if (pos == 0 || neg == 0 || cfg.family == Family::kMajorityBaseline) {
    return TrainedModel(Family::kMajorityBaseline, {leaf_tree(pos > neg ? 1.0 : 0.0)}, 1.0,
                        0.0, cfg.threshold, X.cols());
  }
  switch (cfg.family) {
    case Family::kCart:
      return TrainedModel(Family::kCart, {CartBuilder(X, y, cfg).build()}, 1.0, 0.0,
                          cfg.threshold, X.cols());
    case Family::kExtraTrees: {
      std::vector<Tree> trees;
      for (int t = 0; t < cfg.n_trees; ++t) {
        trees.push_back(
            ExtraTreeBuilder(X, y, cfg, derive_seed(cfg.seed, "extra_trees", t)).build());
      }
      return TrainedModel(Family::kExtraTrees, std::move(trees), 1.0 / cfg.n_trees, 0.0,
                          cfg.threshold, X.cols());
    }
    case Family::kHistGbdt:
      return train_gbdt(X, y, cfg, pos, neg);
    case Family::kMajorityBaseline:
      break;
  }
  throw TrainError("unknown family");
}

}  // namespace learnfuzz
